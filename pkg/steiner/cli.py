"""
Command line entry point: `steiner <command> [flags]`.

Exit codes: 0 pass, 1 mathematical negative or failed precondition,
2 input or configuration error, 3 resource cap exceeded.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from steiner.automorphisms import Endomorphism, invert, reduction_trace, tame_decompose
from steiner.config import Settings, load_settings, use_settings
from steiner.errors import (AlphabetMismatchError, ConfigurationValidationError, InvalidWordError,
                            NotAnAutomorphismError, PreconditionError, ResourceLimitError, STSFormatError,
                            STSValidationError, SteinerError, UnknownGeneratorError, WordSyntaxError)
from steiner.multgroup import parse_element, product, schreier_rewrite, stab_factor
from steiner.relations import (Conjecture, GroupLetter, alternating_search, cayley_bfs, conjecture_scan,
                               free_family, letter_generators, q_word, render_word, s3_phi_word,
                               verify_known_relations)
from steiner.sts import (STS, LoopKind, automorphism_group, export_table, identity_checks, load_sts, parse_sts,
                         point_action, projective_sts15, s_decomposition_check, t4_finite_check, to_exterior,
                         to_interior, to_quasigroup, validate_sts)
from steiner.subloop import GenTuple, closure, is_irreducible, nielsen_reduce, render_parse
from steiner.version_info import Version
from steiner.words import (Alphabet, default_alphabet, normalize, nucleus_scan, parse, parse_raw, render,
                           validate, word_key)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

INPUT_ERRORS = (WordSyntaxError, UnknownGeneratorError, InvalidWordError, AlphabetMismatchError,
                STSFormatError, STSValidationError, ConfigurationValidationError)


@dataclass
class CommandResult:
    code: int = EXIT_OK
    lines: list[str] = field(default_factory=list)
    payload: dict = field(default_factory=dict)


def _alphabet(settings: Settings) -> Alphabet:
    return default_alphabet(settings.generators)


def _word(text: str, settings: Settings):
    word = parse(text, _alphabet(settings))
    if word.length > settings.max_word_len:
        raise ResourceLimitError("word length", settings.max_word_len)
    return word


def _endomorphism(images: Sequence[str], settings: Settings) -> Endomorphism:
    return Endomorphism([_word(text, settings) for text in images], _alphabet(settings))


def cmd_eval(args, settings: Settings) -> CommandResult:
    text = render(_word(args.word, settings), _alphabet(settings))
    return CommandResult(lines=[text], payload={"word": text})


def cmd_normalize(args, settings: Settings) -> CommandResult:
    raw = parse_raw(args.word, _alphabet(settings))
    text = render(normalize(raw), _alphabet(settings))
    canonical = validate(raw)
    return CommandResult(lines=[text, f"already canonical: {'yes' if canonical else 'no'}"],
                         payload={"word": text, "canonical": canonical})


def cmd_closure(args, settings: Settings) -> CommandResult:
    alphabet = _alphabet(settings)
    words = [_word(text, settings) for text in args.words]
    elements = sorted(closure(words, settings.max_word_len, settings.max_closure_size), key=word_key)
    rendered = [render(element, alphabet) for element in elements]
    return CommandResult(lines=rendered + [f"{len(rendered)} elements of length <= {settings.max_word_len}"],
                         payload={"elements": rendered, "count": len(rendered), "max_len": settings.max_word_len})


def cmd_reduce(args, settings: Settings) -> CommandResult:
    alphabet = _alphabet(settings)
    entries = GenTuple(tuple(_word(text, settings) for text in args.words))
    irreducible = is_irreducible(entries)
    result = nielsen_reduce(entries)
    steps = [f"y{step.i + 1}: {render(step.before, alphabet)} -> {render(step.after, alphabet)} "
             f"by {render_parse(step.reducer_parse)} = {render(step.reducer_word, alphabet)}"
             for step in result.steps]
    reduced = [render(entry, alphabet) for entry in result.reduced]
    lines = steps + ["reduced: {" + ", ".join(reduced) + "}",
                     f"input irreducible: {'yes' if irreducible else 'no'}"]
    if result.dropped:
        lines.append("dropped: " + ", ".join(f"y{i + 1}" for i in result.dropped))
    return CommandResult(lines=lines, payload={"reduced": reduced, "steps": steps, "irreducible": irreducible,
                                               "dropped": list(result.dropped)})


def cmd_is_aut(args, settings: Settings) -> CommandResult:
    f = _endomorphism(args.images, settings)
    try:
        steps, _ = reduction_trace(f)
    except NotAnAutomorphismError as e:
        return CommandResult(EXIT_NEGATIVE, [f"not an automorphism: {e.reason}"],
                             {"automorphism": False, "reason": e.reason})
    return CommandResult(lines=[f"automorphism: yes ({len(steps)} reduction steps)"],
                         payload={"automorphism": True, "steps": len(steps)})


def cmd_decompose(args, settings: Settings) -> CommandResult:
    f = _endomorphism(args.images, settings)
    word = tame_decompose(f)
    text = word.render(_alphabet(settings))
    return CommandResult(lines=[text, "recomposition: OK"], payload={"word": text, "recomposition": "OK"})


def cmd_invert(args, settings: Settings) -> CommandResult:
    inverse = invert(_endomorphism(args.images, settings))
    images = [render(image, _alphabet(settings)) for image in inverse.images]
    return CommandResult(lines=[" ".join(images)], payload={"images": images})


def cmd_mult_rewrite(args, settings: Settings) -> CommandResult:
    alphabet = _alphabet(settings)
    g = parse_element(args.element, alphabet)
    h, rep = stab_factor(g)
    rewrite = schreier_rewrite(h)
    factors = [generator.render(alphabet) + ("" if exponent > 0 else "^-1") for generator, exponent in rewrite]
    verified = product(rewrite) == h
    coset = rep.render(alphabet) if rep else "1"
    lines = [f"element: {g.render(alphabet)}", f"coset representative: {coset}",
             "stabilizer part: " + (" ".join(factors) if factors else "1"),
             f"verification: {'OK' if verified else 'FAILED'}"]
    return CommandResult(EXIT_OK if verified else EXIT_NEGATIVE, lines,
                         {"element": g.render(alphabet), "coset": coset, "generators": factors, "verified": verified})


def _require_rank(settings: Settings):
    if settings.generators != 3:
        raise PreconditionError("relation searches work over three generators (-n 3)")


def cmd_relations_verify(args, settings: Settings) -> CommandResult:
    _require_rank(settings)
    report = verify_known_relations()
    lines = [f"{'PASS' if check.holds else 'FAIL'} {check.name}" for check in report.checks]
    payload = {"relations": {check.name: check.holds for check in report.checks}, "all_pass": report.all_pass}
    return CommandResult(EXIT_OK if report.all_pass else EXIT_NEGATIVE, lines, payload)


def cmd_relations_bfs(args, settings: Settings) -> CommandResult:
    _require_rank(settings)
    if args.replay:
        replay = alternating_search(args.replay, args.max_image_len)
        lines = [f"{replay.words_checked} alternating words checked, {len(replay.identities)} identities"]
        lines += [" ".join(word) for word in replay.identities]
        return CommandResult(lines=lines, payload={"words_checked": replay.words_checked,
                                                   "identities": [list(w) for w in replay.identities]})
    if args.free_family:
        generators = free_family()
    else:
        generators = letter_generators([GroupLetter(letter) for letter in args.letters])
    depth = args.depth or settings.depth
    profile, report = cayley_bfs(generators, depth, args.max_image_len, settings.max_elements, settings.threads)
    lines = [f"generators: {', '.join(generators)}",
             "spheres: " + " ".join(str(size) for size in profile.sizes),
             f"elements: {report.element_count}"]
    lines += [f"relator (depth {d}): {' '.join(relator)}"
              for d, relators in report.relators_by_depth.items() for relator in relators]
    return CommandResult(lines=lines, payload={"generators": list(generators), "spheres": profile.sizes,
                                               "elements": report.element_count,
                                               "relators": [list(r) for r in report.relators]})


def cmd_relations_conjecture(args, settings: Settings) -> CommandResult:
    _require_rank(settings)
    depth = args.depth or settings.depth
    report = conjecture_scan(Conjecture(args.target), depth, max_image_len=args.max_image_len,
                             max_elements=settings.max_elements, threads=settings.threads)
    lines = []
    for row in report.rows:
        line = f"depth {row.depth}: cayley {row.cayley_count}, oracle {row.oracle_count}"
        if row.new_relators:
            line += "; new relators: " + ", ".join(" ".join(relator) for relator in row.new_relators)
        lines.append(line)
    divergence = report.first_divergence
    if divergence is None:
        lines.append(f"spheres match to depth {depth}")
    else:
        relators = ", ".join(" ".join(relator) for relator in report.rows[divergence].new_relators)
        lines.append(f"DIVERGENCE at depth {divergence}: {relators or 'a relation outside the presentation'}")
    payload = {"target": args.target, "depth": depth, "divergence": divergence,
               "rows": [{"depth": row.depth, "cayley_count": row.cayley_count, "oracle_count": row.oracle_count,
                         "new_relators": [list(relator) for relator in row.new_relators]}
                        for row in report.rows]}
    return CommandResult(EXIT_OK if divergence is None else EXIT_NEGATIVE, lines, payload)


def cmd_relations_express(args, settings: Settings) -> CommandResult:
    _require_rank(settings)
    f = _endomorphism(args.images, settings)
    letters = q_word(f) if args.stabilizer else s3_phi_word(f)
    text = render_word(letters)
    return CommandResult(lines=[text], payload={"word": [letter.value for letter in letters]})


def cmd_nucleus_scan(args, settings: Settings) -> CommandResult:
    max_len = args.max_len or 3
    report = nucleus_scan(settings.generators, max_len)
    if report.all_eliminated:
        lines = [f"all {report.candidates} candidates eliminated"]
    else:
        lines = ["not eliminated: " + ", ".join(render(u) for u in report.failures)]
    payload = {"candidates": report.candidates, "eliminated": report.eliminated,
               "failures": [render(u) for u in report.failures]}
    return CommandResult(EXIT_OK if report.all_eliminated else EXIT_NEGATIVE, lines, payload)


def _read_sts(args, validated: bool = True) -> STS:
    if args.projective:
        return projective_sts15()
    if not args.file:
        raise PreconditionError("an STS file or --projective is required")
    with open(args.file, "r", encoding="utf-8") as file:
        text = file.read()
    return load_sts(text) if validated else parse_sts(text)


def cmd_sts_validate(args, settings: Settings) -> CommandResult:
    report = validate_sts(_read_sts(args, validated=False))
    payload = {"valid": report.valid, "order": report.order, "message": report.message,
               "pair": list(report.pair) if report.pair else None}
    return CommandResult(EXIT_OK if report.valid else EXIT_INPUT, [report.message], payload)


def _loop(sts: STS, kind: str, base: Optional[int]):
    if kind == LoopKind.QUASIGROUP.value:
        return to_quasigroup(sts)
    if kind == LoopKind.EXTERIOR.value:
        return to_exterior(sts)
    if base is None:
        raise PreconditionError("the interior loop needs --base")
    return to_interior(sts, base)


def cmd_sts_tables(args, settings: Settings) -> CommandResult:
    loop = _loop(_read_sts(args), args.kind, args.base)
    checks = identity_checks(loop)
    lines = [export_table(loop).rstrip("\n")]
    lines += [f"{'PASS' if holds else 'FAIL'} {name}" for name, holds in checks.items()]
    payload = {"kind": loop.kind.value, "order": loop.order, "base": loop.base,
               "table": loop.table.tolist(), "labels": loop.labels, "identities": checks}
    return CommandResult(EXIT_OK if all(checks.values()) else EXIT_NEGATIVE, lines, payload)


def cmd_sts_aut(args, settings: Settings) -> CommandResult:
    sts = _read_sts(args)
    block_group = automorphism_group(sts)
    quasigroup = to_quasigroup(sts)
    exterior = to_exterior(sts)
    quasigroup_group = point_action(automorphism_group(quasigroup), quasigroup)
    exterior_group = point_action(automorphism_group(exterior), exterior)
    coincide = block_group == quasigroup_group == exterior_group
    lines = [f"|Aut(STS)| = {block_group.order} (maps found: {block_group.enumerated})",
             f"|Aut(quasigroup)| = {quasigroup_group.order}",
             f"|Aut(exterior loop)| = {exterior_group.order}",
             f"base: {' '.join(str(p + 1) for p in block_group.base)}",
             f"groups coincide: {'yes' if coincide else 'no'}"]
    payload = {"order": block_group.order, "quasigroup_order": quasigroup_group.order,
               "exterior_order": exterior_group.order, "base": [p + 1 for p in block_group.base],
               "coincide": coincide}
    return CommandResult(EXIT_OK if coincide else EXIT_NEGATIVE, lines, payload)


def cmd_sts_sdecomp(args, settings: Settings) -> CommandResult:
    loop = _loop(_read_sts(args), args.kind, args.base)
    report = s_decomposition_check(loop, settings.max_group_order)
    checks = {"b^2 = 1": report.involutions, "B0 ∩ H = 1": report.trivial_intersection,
              "G = B0·H": report.unique_factorization, "b1·b2 in b3·H": report.closure,
              "(b1*b2)*b2 = b1": report.reproduces_table}
    lines = [f"|G| = {report.group_order}, |H| = {report.inner_order}, |B0| = {report.translations}"]
    lines += [f"{'PASS' if holds else 'FAIL'} {name}" for name, holds in checks.items()]
    payload = {"group_order": report.group_order, "inner_order": report.inner_order,
               "translations": report.translations, "checks": checks, "failures": report.failures}
    return CommandResult(EXIT_OK if report.passed else EXIT_NEGATIVE, lines, payload)


def cmd_sts_t4(args, settings: Settings) -> CommandResult:
    report = t4_finite_check(_read_sts(args), args.base)
    payload = {"base": report.base, "interior_order": report.interior_order,
               "stabilizer_order": report.stabilizer_order, "equal": report.equal}
    return CommandResult(EXIT_OK if report.equal else EXIT_NEGATIVE, [report.render()], payload)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", "--generators", type=int, default=None, help="Alphabet size")
    common.add_argument("--max-len", type=int, default=None, help="Maximum word length")
    common.add_argument("--max-elements", type=int, default=None, help="Maximum number of enumerated elements")
    common.add_argument("--threads", type=int, default=None, help="Worker threads for searches")
    common.add_argument("--json", action="store_true", default=None, help="Emit a JSON document")
    common.add_argument("--config", default=None, help="YAML configuration file")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="steiner", description="Free Steiner loop symbolic engine")
    parser.add_argument("--version", action="version", version=Version.get())
    commands = parser.add_subparsers(dest="command", required=True)

    def command(parent, name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        sub = parent.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    command(commands, "eval", cmd_eval, "Canonical form of a word").add_argument("word")
    command(commands, "normalize", cmd_normalize, "Canonical form and canonicity check").add_argument("word")
    command(commands, "closure", cmd_closure, "Subloop generated by words, up to --max-len").add_argument(
        "words", nargs="+")
    command(commands, "reduce", cmd_reduce, "Nielsen reduction of a generating tuple").add_argument(
        "words", nargs="+")
    for name, handler, help_text in (("is-aut", cmd_is_aut, "Test an endomorphism for bijectivity"),
                                     ("decompose", cmd_decompose, "Write an automorphism as elementary ones"),
                                     ("invert", cmd_invert, "Inverse of an automorphism")):
        command(commands, name, handler, help_text).add_argument("--images", nargs="+", required=True)
    command(commands, "mult-rewrite", cmd_mult_rewrite, "Schreier rewrite in the multiplication group").add_argument(
        "element", help='Product such as "R[x1]*R[(x2 x1)]"')
    command(commands, "nucleus-scan", cmd_nucleus_scan, "Associator witnesses for short words")

    relations = commands.add_parser("relations", help="Relations between automorphisms of S(x1, x2, x3)")
    relation_commands = relations.add_subparsers(dest="relations_command", required=True)
    command(relation_commands, "verify-known", cmd_relations_verify, "Evaluate the known identities")
    bfs = command(relation_commands, "bfs", cmd_relations_bfs, "Cayley graph search")
    bfs.add_argument("--letters", nargs="+", default=["phi", "(12)", "(13)"],
                     choices=[letter.value for letter in GroupLetter])
    bfs.add_argument("--free-family", nargs="?", const="e1", choices=["e1"], default=None,
                     help="Use e1(x2), e1(x3), e1(x2·x3)")
    bfs.add_argument("--depth", type=int, default=None)
    bfs.add_argument("--max-image-len", type=int, default=None)
    bfs.add_argument("--replay", type=int, default=None, metavar="N",
                     help="Search alternating words phi s1 ... phi sN for the identity")
    conjecture = command(relation_commands, "conjecture", cmd_relations_conjecture, "Compare growth with a presentation")
    conjecture.add_argument("--target", choices=[c.value for c in Conjecture], required=True)
    conjecture.add_argument("--depth", type=int, default=None)
    conjecture.add_argument("--max-image-len", type=int, default=None)
    express = command(relation_commands, "express", cmd_relations_express, "Word in phi, (12), (13) or phi, tau, xi")
    express.add_argument("--images", nargs="+", required=True)
    express.add_argument("--stabilizer", action="store_true", help="Use phi, tau, xi (needs x3 fixed)")

    sts = commands.add_parser("sts", help="Finite Steiner triple systems")
    sts_commands = sts.add_subparsers(dest="sts_command", required=True)
    for name, handler, help_text in (("validate", cmd_sts_validate, "Check pair coverage and order"),
                                     ("tables", cmd_sts_tables, "Cayley tables and identity checks"),
                                     ("aut", cmd_sts_aut, "Automorphism groups"),
                                     ("sdecomp", cmd_sts_sdecomp, "S-decomposition of the multiplication group"),
                                     ("t4", cmd_sts_t4, "Interior automorphisms against the point stabilizer")):
        sub = command(sts_commands, name, handler, help_text)
        sub.add_argument("file", nargs="?")
        sub.add_argument("--projective", action="store_true", help="Use the projective STS(15) instead of a file")
        if name in ("tables", "sdecomp"):
            sub.add_argument("--kind", choices=[kind.value for kind in LoopKind], default=LoopKind.EXTERIOR.value)
        if name in ("tables", "sdecomp", "t4"):
            sub.add_argument("--base", type=int, required=name == "t4")
    return parser


def _emit(result: CommandResult, as_json: bool):
    if as_json:
        print(json.dumps({"exit_code": result.code, **result.payload}, sort_keys=True, ensure_ascii=False))
    else:
        for line in result.lines:
            print(line)


def _failure(code: int, error: Exception) -> CommandResult:
    return CommandResult(code, payload={"error": str(error)})


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(args.config, generators=args.generators, max_word_len=args.max_len,
                                 max_elements=args.max_elements, threads=args.threads, json_output=args.json)
    except ConfigurationValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(level=settings.log_level.upper(), format=LOG_FORMAT)
    logger.debug("steiner %s %s", Version.get(), Version.get_env_info())
    use_settings(settings)

    error: Optional[Exception] = None
    try:
        result = args.handler(args, settings)
    except ResourceLimitError as e:
        result, error = _failure(EXIT_RESOURCE, e), e
    except RecursionError:
        error = ResourceLimitError("word depth", sys.getrecursionlimit())
        result = _failure(EXIT_RESOURCE, error)
    except (INPUT_ERRORS + (OSError,)) as e:
        result, error = _failure(EXIT_INPUT, e), e
    except SteinerError as e:
        result, error = _failure(EXIT_NEGATIVE, e), e
    finally:
        use_settings(None)

    logger.info("%s finished with exit code %d", args.command, result.code)
    if error is not None and not settings.json_output:
        print(f"error: {error}", file=sys.stderr)
    else:
        _emit(result, settings.json_output)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
