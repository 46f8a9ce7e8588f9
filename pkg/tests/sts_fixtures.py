import os

from steiner.sts import STS, load_sts, parse_sts

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), 'fixtures')


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES_DIR, f'{name}.sts')


def read_fixture(name: str) -> str:
    with open(fixture_path(name), 'r', encoding='utf-8') as file:
        return file.read()


def load_fixture(name: str) -> STS:
    return load_sts(read_fixture(name))


def parse_fixture(name: str) -> STS:
    return parse_sts(read_fixture(name))


FANO = 'fano'
STS9 = 'sts9'
THREE_POINTS = 'three_points'
SIX_POINTS = 'sixpoints'
VALID_FIXTURES = [THREE_POINTS, FANO, STS9]
