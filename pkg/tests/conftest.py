import random

from groupeq.equations import EquationSystem, exponent_matrix, rank_mod_p
from groupeq.words import COEFF, VAR, Letter


def random_wreath_system(W, rng: random.Random, max_vars: int = 2,
                         prime: int = 2) -> EquationSystem:
    """A random square system over the wreath group W whose exponent matrix
    is invertible mod the given prime."""
    nv = rng.randint(1, max_vars)
    variables = tuple(f"x{i}" for i in range(nv))
    while True:
        symbols: dict[str, int] = {}
        words = []
        for _ in range(nv):
            letters = []
            for _ in range(rng.randint(1, 5)):
                if rng.random() < 0.55:
                    letters.append(Letter(VAR, rng.choice(variables),
                                          rng.choice((1, -1))))
                else:
                    sym = f"g{len(symbols)}"
                    symbols[sym] = rng.randrange(W.order)
                    letters.append(Letter(COEFF, sym, rng.choice((1, -1))))
            words.append(tuple(letters))
        system = EquationSystem(variables, tuple(symbols), tuple(words))
        if rank_mod_p(exponent_matrix(system), prime) == nv:
            return system.bind(W, symbols)
