"""Expression language for data-generating distributions.

An alternative is a tree of primitive distributions and combinators. Every
observation uses fresh leaf draws; leaves are drawn depth-first, left to
right, ``n`` values at a time, so a replicate's stream is consumed in a fixed
order regardless of how replicates are scheduled.

Parameterizations: ``Exp(rate)`` has mean ``1/rate``; ``Gamma(shape, scale)``;
``TriangularSym(a, b)`` has its mode at the midpoint.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import SpecError
from ..stat_core import RngStream, open_uniform, standard_normal


class Alternative:
    """Base node. Subclasses implement ``draw(gen, n)`` and ``to_json()``."""

    def draw(self, gen: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.label()


def _positive(name, v):
    v = float(v)
    if not (math.isfinite(v) and v > 0):
        raise SpecError(f"{name} must be positive, got {v}")
    return v


def _finite(name, v):
    v = float(v)
    if not math.isfinite(v):
        raise SpecError(f"{name} must be finite, got {v}")
    return v


@dataclass(frozen=True)
class Normal(Alternative):
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        _finite("mu", self.mu)
        _positive("sigma", self.sigma)

    def draw(self, gen, n):
        return self.mu + self.sigma * standard_normal(gen, n)

    def to_json(self):
        return {"normal": {"mu": self.mu, "sigma": self.sigma}}

    def label(self):
        return f"N({self.mu:g},{self.sigma:g}^2)"


@dataclass(frozen=True)
class Exp(Alternative):
    rate: float = 1.0

    def __post_init__(self):
        _positive("rate", self.rate)

    def draw(self, gen, n):
        return -np.log(open_uniform(gen, n)) / self.rate

    def to_json(self):
        return {"exp": {"rate": self.rate}}

    def label(self):
        return f"Exp({self.rate:g})"


@dataclass(frozen=True)
class Beta(Alternative):
    alpha: float
    beta: float

    def __post_init__(self):
        _positive("alpha", self.alpha)
        _positive("beta", self.beta)

    def draw(self, gen, n):
        return gen.beta(self.alpha, self.beta, n)

    def to_json(self):
        return {"beta": {"alpha": self.alpha, "beta": self.beta}}

    def label(self):
        return f"Beta({self.alpha:g},{self.beta:g})"


@dataclass(frozen=True)
class Gamma(Alternative):
    shape: float
    scale: float = 1.0

    def __post_init__(self):
        _positive("shape", self.shape)
        _positive("scale", self.scale)

    def draw(self, gen, n):
        return gen.standard_gamma(self.shape, n) * self.scale

    def to_json(self):
        return {"gamma": {"shape": self.shape, "scale": self.scale}}

    def label(self):
        return f"Gamma({self.shape:g},{self.scale:g})"


@dataclass(frozen=True)
class ChiSq(Alternative):
    df: float

    def __post_init__(self):
        _positive("df", self.df)

    def draw(self, gen, n):
        return 2.0 * gen.standard_gamma(0.5 * self.df, n)

    def to_json(self):
        return {"chisq": {"df": self.df}}

    def label(self):
        return f"ChiSq({self.df:g})"


@dataclass(frozen=True)
class Uniform(Alternative):
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not (_finite("a", self.a) < _finite("b", self.b)):
            raise SpecError("uniform needs a < b")

    def draw(self, gen, n):
        return self.a + (self.b - self.a) * open_uniform(gen, n)

    def to_json(self):
        return {"uniform": {"a": self.a, "b": self.b}}

    def label(self):
        return f"U[{self.a:g},{self.b:g}]"


@dataclass(frozen=True)
class TriangularSym(Alternative):
    a: float = -1.0
    b: float = 1.0

    def __post_init__(self):
        if not (_finite("a", self.a) < _finite("b", self.b)):
            raise SpecError("triangular needs a < b")

    def draw(self, gen, n):
        u = open_uniform(gen, n)
        w = self.b - self.a
        lo = self.a + w * np.sqrt(u / 2.0)
        hi = self.b - w * np.sqrt((1.0 - u) / 2.0)
        return np.where(u < 0.5, lo, hi)

    def to_json(self):
        return {"triangular": {"a": self.a, "b": self.b}}

    def label(self):
        return f"Triangular({self.a:g},{self.b:g})"


@dataclass(frozen=True)
class Shift(Alternative):
    of: Alternative
    c: float

    def __post_init__(self):
        _finite("shift", self.c)

    def draw(self, gen, n):
        return self.of.draw(gen, n) + self.c

    def to_json(self):
        return {"shift": self.c, "of": self.of.to_json()}

    def label(self):
        return f"{self.of.label()}{self.c:+g}"


@dataclass(frozen=True)
class Scale(Alternative):
    of: Alternative
    c: float

    def __post_init__(self):
        _finite("scale", self.c)

    def draw(self, gen, n):
        return self.of.draw(gen, n) * self.c

    def to_json(self):
        return {"scale": self.c, "of": self.of.to_json()}

    def label(self):
        return f"{self.c:g}*{self.of.label()}"


@dataclass(frozen=True)
class _Binary(Alternative):
    left: Alternative
    right: Alternative

    op = ""
    symbol = ""

    def draw(self, gen, n):
        x = self.left.draw(gen, n)
        y = self.right.draw(gen, n)
        return self._combine(x, y)

    def to_json(self):
        return {self.op: [self.left.to_json(), self.right.to_json()]}

    def label(self):
        return f"({self.left.label()}{self.symbol}{self.right.label()})"


class Diff(_Binary):
    op, symbol = "diff", "-"

    @staticmethod
    def _combine(x, y):
        return x - y


class Sum(_Binary):
    op, symbol = "sum", "+"

    @staticmethod
    def _combine(x, y):
        return x + y


class Ratio(_Binary):
    """Quotient of independent draws.

    Denominators with an atom or density spike at zero are not rejected; a
    continuous denominator such as ChiSq(3) is almost surely nonzero.
    """

    op, symbol = "ratio", "/"

    @staticmethod
    def _combine(x, y):
        return x / y


@dataclass(frozen=True)
class ExpOf(Alternative):
    of: Alternative

    def draw(self, gen, n):
        return np.exp(self.of.draw(gen, n))

    def to_json(self):
        return {"exp_of": self.of.to_json()}

    def label(self):
        return f"exp({self.of.label()})"


@dataclass(frozen=True)
class Mixture(Alternative):
    """``weight`` * first + (1 - weight) * second, chosen per observation."""

    weight: float
    first: Alternative
    second: Alternative

    def __post_init__(self):
        if not 0.0 <= float(self.weight) <= 1.0:
            raise SpecError("mixture weight must lie in [0, 1]")

    def draw(self, gen, n):
        pick = open_uniform(gen, n) < self.weight
        x = self.first.draw(gen, n)
        y = self.second.draw(gen, n)
        return np.where(pick, x, y)

    def to_json(self):
        return {"mixture": {"weight": self.weight,
                            "components": [self.first.to_json(), self.second.to_json()]}}

    def label(self):
        return f"{self.weight:g}{self.first.label()}+{1 - self.weight:g}{self.second.label()}"


_PRIMITIVES = {
    "normal": (Normal, ("mu", "sigma")),
    "exp": (Exp, ("rate",)),
    "beta": (Beta, ("alpha", "beta")),
    "gamma": (Gamma, ("shape", "scale")),
    "chisq": (ChiSq, ("df",)),
    "uniform": (Uniform, ("a", "b")),
    "triangular": (TriangularSym, ("a", "b")),
}
_BINARY = {"diff": Diff, "sum": Sum, "ratio": Ratio}
_ALIASES = {"n": "normal", "norm": "normal", "exponential": "exp", "chi2": "chisq",
            "unif": "uniform", "u": "uniform", "tri": "triangular"}


def _build_primitive(name, args, where):
    cls, fields = _PRIMITIVES[name]
    if isinstance(args, dict):
        unknown = set(args) - set(fields)
        if unknown:
            raise SpecError(f"{where}: unknown field(s) {sorted(unknown)} for {name}; "
                            f"expected {list(fields)}")
        kwargs = dict(args)
    elif isinstance(args, (list, tuple)):
        if len(args) > len(fields):
            raise SpecError(f"{where}: {name} takes at most {len(fields)} parameters")
        kwargs = dict(zip(fields, args))
    else:
        kwargs = {fields[0]: args}
    try:
        return cls(**{k: float(v) for k, v in kwargs.items()})
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise SpecError(f"{where}: {exc}") from None
        raise SpecError(f"{where}: bad parameters for {name}: {exc}") from None


def from_json(obj, where: str = "spec") -> Alternative:
    """Build an alternative from its nested-dict form.

    A node is a single-key dict naming a primitive or combinator, optionally
    with sibling ``"scale"`` and ``"shift"`` numbers applied in that order,
    e.g. ``{"diff": [{"exp": {"rate": 1}}, {"exp": {"rate": 1}}], "shift": 0.5}``.
    """
    if isinstance(obj, str):
        return parse(obj)
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: expected an object, got {type(obj).__name__}")
    obj = dict(obj)
    if "of" in obj:
        child = from_json(obj.pop("of"), f"{where}.of")
        node = child
        if "scale" in obj:
            node = Scale(node, _finite(f"{where}.scale", obj.pop("scale")))
        if "shift" in obj:
            node = Shift(node, _finite(f"{where}.shift", obj.pop("shift")))
        if obj:
            raise SpecError(f"{where}: unexpected keys {sorted(obj)}")
        return node
    shift = obj.pop("shift", None)
    scale = obj.pop("scale", None)
    if len(obj) != 1:
        raise SpecError(f"{where}: expected exactly one distribution key, got {sorted(obj)}")
    (key, args), = obj.items()
    name = _ALIASES.get(key.lower(), key.lower())
    sub = f"{where}.{key}"
    if name in _PRIMITIVES:
        node = _build_primitive(name, args, sub)
    elif name in _BINARY:
        if not isinstance(args, list) or len(args) != 2:
            raise SpecError(f"{sub}: expects a list of two specs")
        node = _BINARY[name](from_json(args[0], f"{sub}[0]"), from_json(args[1], f"{sub}[1]"))
    elif name == "exp_of":
        node = ExpOf(from_json(args, sub))
    elif name == "mixture":
        if not isinstance(args, dict) or "components" not in args:
            raise SpecError(f"{sub}: expects {{weight, components: [A, B]}}")
        comps = args["components"]
        if not isinstance(comps, list) or len(comps) != 2:
            raise SpecError(f"{sub}.components: expects two specs")
        node = Mixture(float(args.get("weight", 0.5)),
                       from_json(comps[0], f"{sub}.components[0]"),
                       from_json(comps[1], f"{sub}.components[1]"))
    else:
        raise SpecError(f"{where}: unknown distribution {key!r}")
    if scale is not None:
        node = Scale(node, _finite(f"{where}.scale", scale))
    if shift is not None:
        node = Shift(node, _finite(f"{where}.shift", shift))
    return node


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[(),:])")


def parse(text: str) -> Alternative:
    """Parse the compact command-line syntax.

    Primitives are ``name:p1,p2`` (``exp:1``, ``normal:0,1``, ``beta:2,2``);
    combinators are calls: ``diff(exp:1,exp:1)``, ``shift(normal:0,1,0.25)``,
    ``scale(A,c)``, ``ratio(A,B)``, ``exp_of(A)``, ``mixture(w,A,B)``.
    """
    tokens = _TOKEN.findall(text)
    if "".join(tokens).replace(" ", "") != text.replace(" ", ""):
        raise SpecError(f"cannot tokenize distribution {text!r}")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise SpecError(f"malformed distribution {text!r} near token {pos}")
        pos += 1
        return tok

    def number():
        tok = take()
        try:
            return float(tok)
        except ValueError:
            raise SpecError(f"expected a number in {text!r}, got {tok!r}") from None

    def node():
        name = take()
        key = _ALIASES.get(name.lower(), name.lower())
        if key in _PRIMITIVES:
            params = []
            if peek() == ":":
                take(":")
                params.append(number())
                nmax = len(_PRIMITIVES[key][1])
                while len(params) < nmax and peek() == "," and _is_number(tokens, pos + 1):
                    take(",")
                    params.append(number())
            return _build_primitive(key, params, text)
        take("(")
        if key in _BINARY:
            left = node()
            take(",")
            right = node()
            out = _BINARY[key](left, right)
        elif key in ("shift", "scale"):
            inner = node()
            take(",")
            c = number()
            out = Shift(inner, c) if key == "shift" else Scale(inner, c)
        elif key == "exp_of":
            out = ExpOf(node())
        elif key == "mixture":
            w = number()
            take(",")
            left = node()
            take(",")
            out = Mixture(w, left, node())
        else:
            raise SpecError(f"unknown distribution {name!r} in {text!r}")
        take(")")
        return out

    result = node()
    if pos != len(tokens):
        raise SpecError(f"trailing input in distribution {text!r}")
    return result


def _is_number(tokens, i):
    if i >= len(tokens):
        return False
    try:
        float(tokens[i])
    except ValueError:
        return False
    return True


def to_json_string(spec: Alternative) -> str:
    return json.dumps(spec.to_json(), sort_keys=True)


def sample_alternative(spec: Alternative, n: int, rng) -> np.ndarray:
    """``n`` i.i.d. draws from ``spec`` using ``rng`` (a stream or Generator)."""
    if n < 1:
        raise SpecError("n must be positive")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    return np.asarray(spec.draw(gen, int(n)), dtype=np.float64)
