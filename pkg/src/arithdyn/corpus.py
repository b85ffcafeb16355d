"""Built-in experiments.

Each entry is the text of a configuration file, so the corpus goes through
the same validation as user files.  Between them the entries cover a
morphism with ``delta = 1``, morphisms with ``delta > 1``, a stable map
that is not a morphism (Henon), an unstable map (the Cremona involution)
and a monomial map of the torus.
"""

from __future__ import annotations

import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .config import ExperimentConfig, config_from_dict

_HENON = """
[ambient]
projective_dim = 2

[map]
variables = ["X", "Y", "Z"]
polynomials = ["Y*Z", "Y^2 - X*Z - Z^2", "Z^2"]
"""

_CREMONA = """
[ambient]
projective_dim = 2

[map]
polynomials = ["Y*Z", "X*Z", "X*Y"]
"""

CORPUS: dict[str, str] = {
    "henon": 'name = "henon"\nsuite = "main"\niterations = 20\nepsilon = 0.1\n'
             "points = [[0, 0, 1], [2, 3, 1]]\n" + _HENON,
    "henon_picard": 'name = "henon_picard"\nsuite = "picard_one"\niterations = 20\nk = 3\n'
                    "points = [[2, 3, 1]]\n" + _HENON,
    "henon_power": 'name = "henon_power"\nsuite = "power"\niterations = 20\nk = 2\n'
                   "tolerance = 0.1\npoints = [[2, 3, 1]]\n" + _HENON,
    "henon_canheight": 'name = "henon_canheight"\nsuite = "canheight"\niterations = 18\n'
                       "points = [[0, 0, 1], [2, 3, 1]]\n" + _HENON,
    "cremona": 'name = "cremona"\nsuite = "main"\niterations = 20\nepsilon = 0.5\n'
               "points = [[2, 3, 5], [1, 1, 1]]\n" + _CREMONA,
    "cremona_picard": 'name = "cremona_picard"\nsuite = "picard_one"\niterations = 20\nk = 2\n'
                      "points = [[2, 3, 5]]\n" + _CREMONA,
    "squaring": """
name = "squaring"
suite = "morphism"
iterations = 20
points = [[2, 3]]

[ambient]
projective_dim = 1

[map]
polynomials = ["X^2", "Y^2"]
""",
    "quadratic": """
name = "quadratic"
suite = "canheight"
iterations = 18
points = [["1/2", 1], [3, 2]]

[ambient]
projective_dim = 1

[map]
polynomials = ["X^2 - Y^2", "Y^2"]
""",
    "parabolic": """
name = "parabolic"
suite = "morphism"
iterations = 20
points = [[0, 1]]

[ambient]
projective_dim = 1

[map]
polynomials = ["X + Y", "Y"]
""",
    "permutation": """
name = "permutation"
suite = "morphism"
iterations = 20
points = [[1, 2, 3]]

[ambient]
projective_dim = 2

[map]
polynomials = ["Y", "Z", "X"]
""",
    "squaring_p2": """
name = "squaring_p2"
suite = "canheight"
iterations = 16
points = [[2, 3, 5]]

[ambient]
projective_dim = 2

[map]
polynomials = ["X^2", "Y^2", "Z^2"]
""",
    "monomial": """
name = "monomial"
suite = "main"
iterations = 25
epsilon = 0.1
points = [[2, 3]]

[ambient]
torus_dim = 2

[map]
exponent_matrix = [[1, 1], [1, 0]]
""",
    "seqlem": """
name = "seqlem"
suite = "seqlem"

[seqlem]
trials = 1000
n_max = 1000
seed = 0
constant = "stated"
""",
}


def corpus_names() -> list[str]:
    return sorted(CORPUS)


def corpus_text(name: str) -> str:
    try:
        return CORPUS[name]
    except KeyError:
        raise KeyError(f"no corpus entry {name!r}; known: {', '.join(corpus_names())}") from None


def corpus_config(name: str) -> ExperimentConfig:
    return config_from_dict(tomllib.loads(corpus_text(name)), default_name=name)
