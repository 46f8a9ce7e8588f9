"""
Free Steiner loops: canonical words, subloops, automorphisms,
multiplication groups and finite Steiner triple systems
"""
