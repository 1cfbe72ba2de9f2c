"""Ground input generation from ``check_gen`` directives.

Generator vocabulary (one term per argument):

    int(S)        the integer S
    list(S, E)    a list of S elements drawn from E
    out           a fresh variable
    int           a random integer in 0..9
    upto(S)       a random integer in 0..S
    atom          one of a, b, c
    K             an integer literal stands for itself

``S`` is a size variable (a name); every variable ranges over 0..max_size and a
variable used in several places takes the same value everywhere.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from ..frontend.ast import Atom, Compound, IntConst, Term, Variable, make_list


_fresh = itertools.count()


class GenError(ValueError):
    pass


def _var_name(t: Term) -> str | None:
    return t.name if isinstance(t, (Variable, Atom)) else None


def _size_vars(t: Term, acc: list) -> list:
    if isinstance(t, Compound):
        if t.functor in ("int", "upto", "list") and t.args and _var_name(t.args[0]):
            acc.append(_var_name(t.args[0]))
        if t.functor == "list" and len(t.args) == 2:
            _size_vars(t.args[1], acc)
    return acc


def _size(t: Term, env: dict) -> int:
    if isinstance(t, IntConst):
        return t.value
    if _var_name(t) in env:
        return env[_var_name(t)]
    raise GenError(f"bad size in generator: {t}")


def generate(spec: Term, env: dict, rng: random.Random) -> Term:
    if isinstance(spec, IntConst):
        return spec
    if isinstance(spec, Atom):
        if spec.name == "out":
            return Variable(f"_Out{next(_fresh)}")
        if spec.name == "int":
            return IntConst(rng.randint(0, 9))
        if spec.name == "atom":
            return Atom(rng.choice("abc"))
    if isinstance(spec, Compound):
        if spec.functor == "int" and len(spec.args) == 1:
            return IntConst(_size(spec.args[0], env))
        if spec.functor == "upto" and len(spec.args) == 1:
            return IntConst(rng.randint(0, _size(spec.args[0], env)))
        if spec.functor == "list" and len(spec.args) == 2:
            n = _size(spec.args[0], env)
            return make_list([generate(spec.args[1], env, rng) for _ in range(n)])
    raise GenError(f"unknown generator {spec}")


@dataclass
class InputPoint:
    sizes: dict       # generator size variables -> value
    goal: Term


def input_points(gen, max_size: int, seed: int = 0):
    """Yield one ground goal per assignment of the size variables."""
    names = list(dict.fromkeys(v for s in gen.specs for v in _size_vars(s, [])))
    if max_size < 0:
        return
    for values in itertools.product(range(max_size + 1), repeat=len(names)):
        env = dict(zip(names, values))
        rng = random.Random(f"{seed}:{gen.pred}:{values}")
        args = tuple(generate(s, env, rng) for s in gen.specs)
        yield InputPoint(env, Compound(gen.pred.name, args) if args else Atom(gen.pred.name))
