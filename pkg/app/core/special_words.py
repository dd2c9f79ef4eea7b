"""特殊单词

simply-braided 单词与其势函数闭式、nice 单词的构造与锥报告，
以及极小权情形下的 i-trail 与子词两种独立的 ς 热带形式计算。
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from app.config.settings import get_settings
from app.core.cluster_engine import MutationStep, steps_for_moves
from app.core.exact_poly import LaurentPolynomial
from app.core.lie_core import (
    CartanDatum,
    Move,
    MoveKind,
    MoveSequence,
    PositiveRoot,
    Word,
    breadth_first_moves,
    coset_data,
    convex_order,
    i_star,
    is_minuscule,
    longest_element,
    longest_parabolic_word,
    reduced_words,
    require_reduced_w0,
    weyl_element,
    weyl_group_order,
    word_props,
)
from app.core.polyhedral.redundancy import (
    InequalitySystem,
    classify_redundancy,
    same_cone,
    system_from_string_system,
)
from app.core.polyhedral.simplex import farkas_member
from app.core.stringcone import string_system
from app.utils.exceptions import (
    CartanTypeError,
    EnumerationCapError,
    IllegalMoveError,
    InvalidWitnessError,
    NotMinusculeError,
)
from app.utils.logger import get_logger, log_execution_time

logger = get_logger(__name__)

Vector = Tuple[int, ...]


# ==================== simply-braided ====================


def _braid_root(c: CartanDatum, letter: int) -> int:
    """3项移动最左根须等于的单根：默认 α_letter，dual 约定下为 α_{letter*}"""
    if get_settings().conventions.simply_braided_root == "dual":
        return i_star(c, letter)
    return letter


@dataclass(frozen=True)
class SimplyBraidedWitness:
    """到以 letter 结尾单词的移动序列，以及每个3项移动的中间根"""

    letter: int
    moves: MoveSequence
    middle_roots: Tuple[PositiveRoot, ...] = field(default=())

    @property
    def steps(self) -> Tuple[MutationStep, ...]:
        return steps_for_moves(self.moves.moves)


def _respects_constraint(c: CartanDatum, word: Word, move: Move, node: int, cache: Dict[Word, Tuple[PositiveRoot, ...]]) -> bool:
    if move.kind is MoveKind.TWO_TERM:
        return True
    if word not in cache:
        cache[word] = convex_order(c, word)
    return cache[word][move.position - 2] == c.simple_root(node)


def simply_braided(c: CartanDatum, i: Word, letter: int) -> Optional[SimplyBraidedWitness]:
    """在约束下的可达集合里广度优先搜索；返回 None 表示不存在见证"""
    require_reduced_w0(c, i)
    c.check_letter(letter)
    node = _braid_root(c, letter)
    cache: Dict[Word, Tuple[PositiveRoot, ...]] = {}
    path = breadth_first_moves(
        c,
        i,
        lambda w: w.letters[-1] == letter,
        allow=lambda w, move: _respects_constraint(c, w, move, node, cache),
    )
    if path is None:
        logger.debug(f"{i} is not simply-braided for {letter}")
        return None
    middle = _middle_roots(c, path.words(c), path.moves, cache)
    return SimplyBraidedWitness(letter=letter, moves=path, middle_roots=middle)


def _middle_roots(
    c: CartanDatum, words: Sequence[Word], moves: Sequence[Move], cache: Dict[Word, Tuple[PositiveRoot, ...]]
) -> Tuple[PositiveRoot, ...]:
    middle = []
    for word, move in zip(words, moves):
        if move.kind is MoveKind.THREE_TERM:
            middle.append(cache.setdefault(word, convex_order(c, word))[move.position - 1])
    return tuple(middle)


def _validate_witness(c: CartanDatum, i: Word, letter: int, witness: SimplyBraidedWitness) -> List[Word]:
    if witness.moves.source != i or witness.letter != letter:
        raise InvalidWitnessError("Witness does not start at the given word", {"word": list(i.letters)})
    try:
        words = witness.moves.words(c)
    except IllegalMoveError as e:
        raise InvalidWitnessError(f"Witness moves are not applicable: {e}") from e
    if words[-1].letters[-1] != letter:
        raise InvalidWitnessError("Witness target does not end in the letter", {"target": list(words[-1].letters)})
    node = _braid_root(c, letter)
    cache: Dict[Word, Tuple[PositiveRoot, ...]] = {}
    for word, move in zip(words, witness.moves.moves):
        if not _respects_constraint(c, word, move, node, cache):
            raise InvalidWitnessError(f"Move {move} on {word} violates the leftmost-root constraint")
    expected = _middle_roots(c, words, witness.moves.moves, cache)
    if witness.middle_roots != expected:
        raise InvalidWitnessError(
            "Witness middle roots do not match its moves",
            {
                "given": [list(r.coefficients) for r in witness.middle_roots],
                "expected": [list(r.coefficients) for r in expected],
            },
        )
    return words


def tubes_potential(c: CartanDatum, i: Word, letter: int, witness: SimplyBraidedWitness) -> LaurentPolynomial:
    """闭式 X_f⁻¹(1 + Σ_ℓ ∏_{j>s−ℓ} X_{m_j}⁻¹)

    m_1..m_s 为被变异顶点在 Σ_i 中的原始标号（按变异顺序），f 为该字母的冻结顶点。
    见证携带的中间根必须与其3项移动逐一对应，s 即中间根个数。

    Raises:
        InvalidWitnessError: 见证不合法
    """
    _validate_witness(c, i, letter, witness)
    n = len(i)
    labels = list(range(1, n + 1))
    mutated: List[int] = []
    for step in witness.steps:
        if step.vertex is not None:
            mutated.append(labels[step.vertex - 1])
        if step.swap is not None:
            a, b = step.swap
            labels[a - 1], labels[b - 1] = labels[b - 1], labels[a - 1]
    frozen_vertex = i.last_occurrence(letter)
    assert frozen_vertex is not None

    inner = LaurentPolynomial.constant(n, 1)
    tail = LaurentPolynomial.constant(n, 1)
    for vertex in reversed(mutated):
        tail = tail * LaurentPolynomial.variable(n, vertex, -1)
        inner = inner + tail
    return LaurentPolynomial.variable(n, frozen_vertex, -1) * inner


# ==================== nice 单词 ====================


def _check_order_cap(c: CartanDatum) -> None:
    cap = get_settings().scan.weyl_order_cap
    order = weyl_group_order(c)
    if order > cap:
        raise EnumerationCapError(f"Weyl group of {c.label} has order {order}", size=order, cap=cap)


def good_enumerations(c: CartanDatum) -> List[Tuple[int, ...]]:
    """ω_{j_t} 在删去 j_1..j_{t−1} 后的子图上是极小权"""
    _check_order_cap(c)
    result: List[Tuple[int, ...]] = []

    def extend(prefix: Tuple[int, ...], remaining: FrozenSet[int]) -> None:
        if not remaining:
            result.append(prefix)
            return
        for node in sorted(remaining):
            if is_minuscule(c, node, remaining):
                extend(prefix + (node,), remaining - {node})

    extend((), frozenset(c.nodes))
    return result


def nice_word(c: CartanDatum, enumeration: Sequence[int]) -> Word:
    """τ_1⋯τ_n，τ_t = w₀(J_{t−1})·w₀(J_t) 的字典序最小约化单词"""
    letters: List[int] = []
    previous = Word(())
    for t in range(1, len(enumeration) + 1):
        current = longest_parabolic_word(c, frozenset(enumeration[:t]))
        element = weyl_element(c, previous.letters + current.letters)
        tau = next(reduced_words(c, element, limit=1), Word(()))
        letters.extend(tau.letters)
        previous = current
    return require_reduced_w0(c, Word(tuple(letters)))


@dataclass(frozen=True)
class NiceMachinery:
    good_enumerations: Tuple[Tuple[int, ...], ...]
    nice_words: Tuple[Word, ...]


def nice_words(c: CartanDatum) -> List[Word]:
    return list(nice_machinery(c).nice_words)


def nice_machinery(c: CartanDatum) -> NiceMachinery:
    """Raises:
        CartanTypeError: E8 没有 nice 单词
        EnumerationCapError: Weyl 群阶超过上限
    """
    if c.family == "E" and c.rank == 8:
        raise CartanTypeError("Nice words do not exist in type E8", c.family, c.rank)
    enumerations = good_enumerations(c)
    words: List[Word] = []
    for enumeration in enumerations:
        word = nice_word(c, enumeration)
        if word not in words:
            words.append(word)
    logger.info(f"{c.label}: {len(enumerations)} good enumerations, {len(words)} nice words")
    return NiceMachinery(tuple(enumerations), tuple(words))


def _pair_form(n: int, k: int, l: int) -> Vector:
    form = [0] * n
    form[k - 1] += 1
    form[l - 1] -= 1
    return tuple(form)


def _form_type(form: Vector) -> str:
    nonzero = sorted(v for v in form if v)
    if nonzero == [1]:
        return "coordinate"
    if nonzero == [-1, 1]:
        return "difference"
    return "other"


@log_execution_time("nice_cone_report")
def nice_cone_report(c: CartanDatum, i: Word) -> Dict[str, Any]:
    """比较 ς 锥与字面两两不等式 t_k ≥ t_{k'} (k < k')"""
    strings = string_system(c, i)
    system = system_from_string_system(strings)
    report = classify_redundancy(system)
    n = len(i)
    literal = InequalitySystem.from_forms([_pair_form(n, k, l) for k, l in itertools.combinations(range(1, n + 1), 2)], n)
    valid_pairs = [
        [k, l]
        for k, l in itertools.combinations(range(1, n + 1), 2)
        if farkas_member(_pair_form(n, k, l), system.forms) is not None
    ]
    form_types = {str(form): _form_type(form) for form in system.forms}
    return {
        "word": list(i.letters),
        "multiplicity_free": {str(d.letter): d.polynomial.is_multiplicity_free() for d in strings.letters},
        "simply_braided": {str(letter): simply_braided(c, i, letter) is not None for letter in c.nodes},
        "irredundant": not report.redundant,
        "facet_count": report.facet_count,
        "literal_same_cone": same_cone(system, literal),
        "valid_literal_pairs": valid_pairs,
        "form_types": form_types,
        "only_pair_or_coordinate_forms": all(t != "other" for t in form_types.values()),
    }


# ==================== 极小权 oracle ====================


def _trail_node(c: CartanDatum, letter: int, endpoints: Optional[str]) -> int:
    endpoints = endpoints or get_settings().conventions.trail_endpoints
    node = i_star(c, letter) if endpoints == "dual" else letter
    if not is_minuscule(c, node):
        raise NotMinusculeError(letter, c.label)
    return node


def trail_forms_subword(
    c: CartanDatum,
    i: Word,
    letter: int,
    variant: Optional[str] = None,
    endpoints: Optional[str] = None,
) -> Set[Vector]:
    """枚举是 u 的约化单词的子词，按部分乘积作用求线性形式

    t_k 的系数为 s_{i_{k(1)}}⋯s_{i_{k(j)}} α_{i_k} 在 ω^∨ 上的配对，k(j) < k < k(j+1)；
    variant "j+1" 时乘积多取一项。

    Raises:
        NotMinusculeError: 字母不是极小权
    """
    require_reduced_w0(c, i)
    node = _trail_node(c, letter, endpoints)
    variant = variant or get_settings().conventions.subword_partial_product
    target = coset_data(c, node).u_element
    length = target.length
    n = len(i)
    forms: Set[Vector] = set()

    def walk(start: int, chosen: Tuple[int, ...]) -> None:
        if len(chosen) == length:
            if weyl_element(c, (i.letter_at(k) for k in chosen)) == target:
                forms.add(_subword_form(c, i, chosen, node, variant))
            return
        for position in range(start, n + 1):
            candidate = chosen + (position,)
            if word_props(c, Word(tuple(i.letter_at(k) for k in candidate))).reduced:
                walk(position + 1, candidate)

    walk(1, ())
    return forms


def _subword_form(c: CartanDatum, i: Word, chosen: Tuple[int, ...], node: int, variant: str) -> Vector:
    n = len(i)
    bounds = (0,) + chosen + (n + 1,)
    form = [0] * n
    for j in range(len(chosen) + 1):
        count = j if variant == "j" else min(j + 1, len(chosen))
        reflections = [i.letter_at(k) for k in chosen[:count]]
        for k in range(bounds[j] + 1, bounds[j + 1]):
            root = c.simple_root(i.letter_at(k)).coefficients
            for r in reversed(reflections):
                root = c.reflect_root(root, r)
            form[k - 1] = root[node - 1]
    return tuple(form)


@dataclass(frozen=True)
class Trail:
    """权序列 γ_0..γ_N，指数 c_k ∈ {0,1}，线性形式 d"""

    weights: Tuple[Vector, ...]
    exponents: Tuple[int, ...]
    form: Vector

    def to_json(self) -> Dict[str, Any]:
        return {"weights": [list(w) for w in self.weights], "c": list(self.exponents), "d": list(self.form)}


def enumerate_trails(c: CartanDatum, i: Word, letter: int, endpoints: Optional[str] = None) -> List[Trail]:
    """极小模中从 ω^∨ 到 w₀ s ω^∨ 的全部 i-trail（深度优先）

    c_k = 1 仅当 ⟨γ_k, α^∨_{i_k}⟩ = −1，即升算子在极小模上非零。

    Raises:
        NotMinusculeError: 字母不是极小权
    """
    require_reduced_w0(c, i)
    node = _trail_node(c, letter, endpoints)
    start = tuple(1 if j == node else 0 for j in c.nodes)
    end = longest_element(c).apply(c.reflect_weight(start, node))
    n = len(i)
    trails: List[Trail] = []

    def walk(k: int, weights: Tuple[Vector, ...], exponents: Tuple[int, ...]) -> None:
        current = weights[-1]
        if k > n:
            if current == tuple(end):
                trails.append(Trail(weights, exponents, _trail_form(i, weights)))
            return
        walk(k + 1, weights + (current,), exponents + (0,))
        a = i.letter_at(k)
        if current[a - 1] == 1:
            alpha = c.root_in_weights(c.simple_root(a).coefficients)
            lowered = tuple(x - y for x, y in zip(current, alpha))
            walk(k + 1, weights + (lowered,), exponents + (1,))

    walk(1, (start,), ())
    return sorted(trails, key=lambda trail: trail.exponents)


def _trail_form(i: Word, weights: Tuple[Vector, ...]) -> Vector:
    form = []
    for k in range(1, len(i) + 1):
        a = i.letter_at(k)
        value = Fraction(weights[k - 1][a - 1] + weights[k][a - 1], 2)
        form.append(int(value))
    return tuple(form)


def trail_convention_report(c: CartanDatum, i: Word, letter: int) -> Dict[str, bool]:
    """两种起止约定各自是否给出 trop(ς)"""
    expected = set(string_system(c, i).letter(letter).tropical.forms)
    result = {}
    for endpoints in ("dual", "direct"):
        try:
            forms = {trail.form for trail in enumerate_trails(c, i, letter, endpoints)}
        except NotMinusculeError:
            result[endpoints] = False
            continue
        result[endpoints] = forms == expected
    return result


def subword_variant_report(c: CartanDatum, i: Word, letter: int) -> Dict[str, bool]:
    """两种部分乘积下标各自是否给出 trop(ς)"""
    expected = set(string_system(c, i).letter(letter).tropical.forms)
    return {variant: trail_forms_subword(c, i, letter, variant) == expected for variant in ("j", "j+1")}


__all__ = [
    "SimplyBraidedWitness",
    "simply_braided",
    "tubes_potential",
    "good_enumerations",
    "nice_word",
    "nice_words",
    "NiceMachinery",
    "nice_machinery",
    "nice_cone_report",
    "trail_forms_subword",
    "Trail",
    "enumerate_trails",
    "trail_convention_report",
    "subword_variant_report",
]
