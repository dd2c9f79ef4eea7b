"""单边型Cartan数据与Weyl群组合

提供 A/D/E 型Cartan矩阵、以基本权坐标作用的Weyl群元素、约化单词枚举、
2项/3项移动、凸序以及陪集代表元。

位置、字母、顶点一律使用从1开始的编号；内部数组下标在边界处转换。
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from math import factorial
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from app.utils.exceptions import (
    CartanTypeError,
    IllegalMoveError,
    LetterRangeError,
    NotReducedError,
    WordMismatchError,
)
from app.utils.helpers import parse_int_sequence, parse_type_string
from app.utils.logger import get_logger

logger = get_logger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]
Weight = Tuple[int, ...]


# ==================== Cartan数据 ====================


@dataclass(frozen=True)
class PositiveRoot:
    """正根，以单根坐标表示"""

    coefficients: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not any(self.coefficients) or min(self.coefficients) < 0:
            raise ValueError(f"Not a positive root vector: {self.coefficients}")

    @property
    def height(self) -> int:
        return sum(self.coefficients)

    def coefficient(self, node: int) -> int:
        """单根 α_node 的系数，即与 ω_node^∨ 的配对"""
        return self.coefficients[node - 1]

    def __str__(self) -> str:
        parts = []
        for index, value in enumerate(self.coefficients, start=1):
            if value == 1:
                parts.append(f"a{index}")
            elif value:
                parts.append(f"{value}a{index}")
        return "+".join(parts)


@dataclass(frozen=True)
class CartanDatum:
    """单边型Cartan数据

    Attributes:
        family: 型号 A、D 或 E
        rank: 秩 n
        matrix: n×n 对称Cartan矩阵，节点编号 1..n
    """

    family: str
    rank: int
    matrix: IntMatrix

    def __post_init__(self) -> None:
        n = self.rank
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise CartanTypeError("Cartan matrix shape does not match rank", self.family, n)
        for i in range(n):
            if self.matrix[i][i] != 2:
                raise CartanTypeError("Diagonal entries must be 2", self.family, n)
            for j in range(n):
                if i != j and self.matrix[i][j] not in (0, -1):
                    raise CartanTypeError("Off-diagonal entries must be 0 or -1", self.family, n)
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise CartanTypeError("Cartan matrix must be symmetric", self.family, n)

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def nodes(self) -> range:
        return range(1, self.rank + 1)

    def entry(self, i: int, j: int) -> int:
        """c_{i,j}，节点从1开始编号"""
        return self.matrix[i - 1][j - 1]

    def check_letter(self, letter: int) -> int:
        if not 1 <= letter <= self.rank:
            raise LetterRangeError(letter, self.rank)
        return letter

    def dynkin_graph(self) -> "nx.Graph":
        graph = nx.Graph()
        graph.add_nodes_from(self.nodes)
        for i in self.nodes:
            for j in range(i + 1, self.rank + 1):
                if self.entry(i, j) != 0:
                    graph.add_edge(i, j)
        return graph

    def root_in_weights(self, root: Sequence[int]) -> Weight:
        """单根坐标 -> 基本权坐标：(Cβ)_m"""
        return tuple(
            sum(self.matrix[m][j] * root[j] for j in range(self.rank)) for m in range(self.rank)
        )

    def reflect_root(self, root: Sequence[int], node: int) -> Tuple[int, ...]:
        """s_node 作用在单根坐标向量上"""
        pairing = sum(root[m] * self.matrix[m][node - 1] for m in range(self.rank))
        result = list(root)
        result[node - 1] -= pairing
        return tuple(result)

    def reflect_weight(self, weight: Sequence[int], node: int) -> Weight:
        """s_node(λ) = λ − λ(α^∨_node) α_node，基本权坐标"""
        pairing = weight[node - 1]
        if pairing == 0:
            return tuple(weight)
        row = self.matrix[node - 1]
        return tuple(weight[m] - pairing * row[m] for m in range(self.rank))

    @cached_property
    def positive_roots(self) -> Tuple[PositiveRoot, ...]:
        """所有正根，按高度再按坐标排序"""
        simple = [tuple(1 if m == j else 0 for m in range(self.rank)) for j in range(self.rank)]
        seen = set(simple)
        queue = deque(simple)
        while queue:
            beta = queue.popleft()
            for node in self.nodes:
                image = self.reflect_root(beta, node)
                if min(image) >= 0 and any(image) and image not in seen:
                    seen.add(image)
                    queue.append(image)
        ordered = sorted(seen, key=lambda v: (sum(v), v))
        return tuple(PositiveRoot(v) for v in ordered)

    def simple_root(self, node: int) -> PositiveRoot:
        self.check_letter(node)
        return PositiveRoot(tuple(1 if m == node - 1 else 0 for m in range(self.rank)))

    @property
    def rho(self) -> Weight:
        return tuple(1 for _ in range(self.rank))

    def __str__(self) -> str:
        return self.label


def _dynkin_edges(family: str, rank: int) -> List[Tuple[int, int]]:
    if family == "A" and rank >= 1:
        return [(i, i + 1) for i in range(1, rank)]
    if family == "D" and rank >= 4:
        # 1-2-...-(n-2)，且 n-2 同时连接 n-1 与 n；D4 中节点2居中
        edges = [(i, i + 1) for i in range(1, rank - 1)]
        edges.append((rank - 2, rank))
        return edges
    if family == "E" and rank in (6, 7, 8):
        edges = [(1, 3), (2, 4)]
        edges.extend((i, i + 1) for i in range(3, rank))
        return edges
    raise CartanTypeError(f"Invalid simply-laced type {family}{rank}", family, rank)


@lru_cache(maxsize=None)
def cartan_matrix(family: str, rank: int) -> CartanDatum:
    """构造单边型Cartan数据

    Args:
        family: "A"、"D" 或 "E"
        rank: 秩

    Returns:
        CartanDatum

    Raises:
        CartanTypeError: 型号与秩的组合无效
    """
    family = family.upper()
    if rank < 1:
        raise CartanTypeError(f"Rank must be positive, got {rank}", family, rank)
    edges = _dynkin_edges(family, rank)
    matrix = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for a, b in edges:
        matrix[a - 1][b - 1] = -1
        matrix[b - 1][a - 1] = -1
    datum = CartanDatum(family, rank, tuple(tuple(row) for row in matrix))

    graph = datum.dynkin_graph()
    if not nx.is_connected(graph) or graph.number_of_edges() != rank - 1:
        raise CartanTypeError("Dynkin diagram is not a connected tree", family, rank)
    return datum


def parse_cartan(text: str) -> CartanDatum:
    """从 "D4" 这样的字符串构造Cartan数据"""
    family, rank = parse_type_string(text)
    return cartan_matrix(family, rank)


def weyl_group_order(c: CartanDatum) -> int:
    """Weyl群的阶"""
    n = c.rank
    if c.family == "A":
        return factorial(n + 1)
    if c.family == "D":
        return 2 ** (n - 1) * factorial(n)
    return {6: 51840, 7: 2903040, 8: 696729600}[n]


# ==================== 单词与Weyl群元素 ====================


@dataclass(frozen=True, order=True)
class Word:
    """字母序列 (i_1,…,i_m)"""

    letters: Tuple[int, ...]

    @classmethod
    def parse(cls, text: str) -> "Word":
        """解析空白或逗号分隔的单词文本"""
        return cls(parse_int_sequence(text))

    @classmethod
    def of(cls, *letters: int) -> "Word":
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def letter_at(self, position: int) -> int:
        """第 position 个字母，位置从1开始"""
        return self.letters[position - 1]

    def last_occurrence(self, letter: int) -> Optional[int]:
        for position in range(len(self.letters), 0, -1):
            if self.letters[position - 1] == letter:
                return position
        return None

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.letters)


def validate_word(c: CartanDatum, w: Word) -> Word:
    for letter in w.letters:
        c.check_letter(letter)
    return w


@lru_cache(maxsize=None)
def _simple_reflection(c: CartanDatum, node: int) -> np.ndarray:
    # (s_i λ)_j = λ_j − c_{i,j} λ_i，对应矩阵第 i 列的修改
    matrix = np.eye(c.rank, dtype=np.int64)
    for j in range(c.rank):
        matrix[j, node - 1] -= c.matrix[node - 1][j]
    matrix.setflags(write=False)
    return matrix


def _length_of_rho_image(c: CartanDatum, rho_image: Sequence[int]) -> int:
    # ℓ(w) = #{β>0 : ⟨wρ, β^∨⟩ < 0}
    count = 0
    for root in c.positive_roots:
        if sum(b * v for b, v in zip(root.coefficients, rho_image)) < 0:
            count += 1
    return count


@dataclass(frozen=True)
class WeylElement:
    """Weyl群元素，以在权格上的整数矩阵表示（基本权基）"""

    cartan: CartanDatum
    matrix: IntMatrix

    @classmethod
    def from_array(cls, c: CartanDatum, array: np.ndarray) -> "WeylElement":
        return cls(c, tuple(tuple(int(x) for x in row) for row in array))

    @classmethod
    def identity(cls, c: CartanDatum) -> "WeylElement":
        return cls.from_array(c, np.eye(c.rank, dtype=np.int64))

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)

    @cached_property
    def rho_image(self) -> Weight:
        """wρ，ρ 为所有基本权之和；它唯一决定 w"""
        return tuple(sum(row) for row in self.matrix)

    @cached_property
    def length(self) -> int:
        return _length_of_rho_image(self.cartan, self.rho_image)

    def left_descents(self) -> Tuple[int, ...]:
        """满足 ℓ(s_i w) < ℓ(w) 的 i"""
        return tuple(i for i, v in enumerate(self.rho_image, start=1) if v < 0)

    def left_multiply(self, node: int) -> "WeylElement":
        return WeylElement.from_array(self.cartan, _simple_reflection(self.cartan, node) @ self.as_array())

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement.from_array(self.cartan, self.as_array() @ other.as_array())

    def apply(self, weight: Sequence[int]) -> Weight:
        return tuple(int(x) for x in self.as_array() @ np.array(weight, dtype=np.int64))

    def is_identity(self) -> bool:
        return all(v > 0 for v in self.rho_image)


def weyl_element(c: CartanDatum, letters: Iterable[int]) -> WeylElement:
    """s_{i_1} s_{i_2} ⋯ s_{i_m} 的矩阵"""
    matrix = np.eye(c.rank, dtype=np.int64)
    for letter in letters:
        c.check_letter(letter)
        matrix = matrix @ _simple_reflection(c, letter)
    return WeylElement.from_array(c, matrix)


@dataclass(frozen=True)
class WordProperties:
    """单词的计算属性"""

    element: WeylElement
    reduced: bool
    length: int


def word_props(c: CartanDatum, w: Word) -> WordProperties:
    """计算单词对应的Weyl群元素与约化性

    Args:
        c: Cartan数据
        w: 单词

    Returns:
        WordProperties，其中 length 为元素长度
    """
    validate_word(c, w)
    element = weyl_element(c, w.letters)
    return WordProperties(element=element, reduced=element.length == len(w), length=element.length)


@lru_cache(maxsize=None)
def longest_element(c: CartanDatum) -> WeylElement:
    """最长元 w₀"""
    return weyl_element(c, longest_parabolic_word(c, frozenset(c.nodes)).letters)


def longest_parabolic_word(c: CartanDatum, nodes: FrozenSet[int]) -> Word:
    """抛物子群 W_J 的最长元的一个约化单词（左乘贪心构造）"""
    vector = list(c.rho)
    letters: List[int] = []
    while True:
        candidates = [j for j in sorted(nodes) if vector[j - 1] > 0]
        if not candidates:
            break
        j = candidates[0]
        vector = list(c.reflect_weight(vector, j))
        letters.insert(0, j)
    return Word(tuple(letters))


def num_positive_roots(c: CartanDatum) -> int:
    return len(c.positive_roots)


def is_reduced_for_w0(c: CartanDatum, w: Word) -> bool:
    props = word_props(c, w)
    return props.reduced and props.length == num_positive_roots(c)


def require_reduced_w0(c: CartanDatum, w: Word) -> Word:
    """检查单词是 w₀ 的约化单词，否则抛出 NotReducedError"""
    if not is_reduced_for_w0(c, w):
        raise NotReducedError(w.letters, expected=f"w0 of {c.label}")
    return w


def reduced_words(c: CartanDatum, w: WeylElement, limit: Optional[int] = None) -> Iterator[Word]:
    """按字典序枚举 w 的所有约化单词

    第一个字母取自 w 的左下降集，按升序递归，因此输出严格按字典序，
    且每个约化单词恰好出现一次。

    Args:
        c: Cartan数据
        w: Weyl群元素
        limit: 最多输出的单词数

    Yields:
        Word
    """
    if limit is not None and limit <= 0:
        return
    emitted = 0
    total = w.length

    def walk(vector: Weight, prefix: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == total:
            yield prefix
            return
        for node in c.nodes:
            if vector[node - 1] < 0:
                yield from walk(c.reflect_weight(vector, node), prefix + (node,))

    for letters in walk(w.rho_image, ()):
        yield Word(letters)
        emitted += 1
        if limit is not None and emitted >= limit:
            return


# ==================== 2项/3项移动 ====================


class MoveKind(str, Enum):
    """移动类型"""

    TWO_TERM = "two-term"  # 交换 s_a s_b = s_b s_a
    THREE_TERM = "three-term"  # 辫子关系 s_a s_b s_a = s_b s_a s_b


@dataclass(frozen=True, order=True)
class Move:
    """单个移动；2项移动交换位置 k,k+1，3项移动改写位置 k−1,k,k+1"""

    kind: MoveKind
    position: int

    def __str__(self) -> str:
        return f"{self.kind.value}@{self.position}"


def apply_move(c: CartanDatum, w: Word, move: Move) -> Word:
    """对单词施加一个移动

    Raises:
        IllegalMoveError: 移动在该位置不合法
        LetterRangeError: 移动涉及的字母超出节点范围
    """
    letters = list(w.letters)
    k = move.position
    if move.kind is MoveKind.TWO_TERM:
        if not 1 <= k < len(letters):
            raise IllegalMoveError(f"Two-term move position {k} out of range", w.letters, k)
        a, b = (c.check_letter(x) for x in letters[k - 1 : k + 1])
        if a == b or c.entry(a, b) != 0:
            raise IllegalMoveError(f"Letters {a},{b} at {k} do not commute", w.letters, k)
        letters[k - 1], letters[k] = b, a
        return Word(tuple(letters))

    if not 2 <= k < len(letters):
        raise IllegalMoveError(f"Three-term move position {k} out of range", w.letters, k)
    a, b, a2 = (c.check_letter(x) for x in letters[k - 2 : k + 1])
    if a != a2 or a == b or c.entry(a, b) != -1:
        raise IllegalMoveError(
            f"Pattern ({a},{b},{a2}) at {k} is not a braid pattern", w.letters, k
        )
    letters[k - 2], letters[k - 1], letters[k] = b, a, b
    return Word(tuple(letters))


def available_moves(c: CartanDatum, w: Word) -> List[Tuple[Move, Word]]:
    """所有合法移动及其结果，按结果单词字典序排列"""
    letters = w.letters
    result: List[Tuple[Move, Word]] = []
    for k in range(1, len(letters)):
        a, b = letters[k - 1], letters[k]
        if a != b and c.entry(a, b) == 0:
            move = Move(MoveKind.TWO_TERM, k)
            result.append((move, apply_move(c, w, move)))
    for k in range(2, len(letters)):
        a, b, a2 = letters[k - 2], letters[k - 1], letters[k]
        if a == a2 and a != b and c.entry(a, b) == -1:
            move = Move(MoveKind.THREE_TERM, k)
            result.append((move, apply_move(c, w, move)))
    result.sort(key=lambda item: item[1].letters)
    return result


@dataclass(frozen=True)
class MoveSequence:
    """从 source 到 target 的移动序列"""

    source: Word
    target: Word
    moves: Tuple[Move, ...]

    def __len__(self) -> int:
        return len(self.moves)

    def words(self, c: CartanDatum) -> List[Word]:
        """依次经过的单词，包括起点和终点"""
        current = self.source
        chain = [current]
        for move in self.moves:
            current = apply_move(c, current, move)
            chain.append(current)
        if current != self.target:
            raise IllegalMoveError("Move sequence does not reach its target", self.source.letters, -1)
        return chain

    @property
    def three_term_count(self) -> int:
        return sum(1 for move in self.moves if move.kind is MoveKind.THREE_TERM)


MoveFilter = Callable[[Word, Move], bool]


def breadth_first_moves(
    c: CartanDatum,
    start: Word,
    is_goal: Callable[[Word], bool],
    allow: Optional[MoveFilter] = None,
) -> Optional[MoveSequence]:
    """单词图上的广度优先搜索

    邻居按结果单词字典序展开，因此返回的最短路径是确定的。

    Args:
        c: Cartan数据
        start: 起点单词
        is_goal: 目标判定
        allow: 可选的移动过滤器 (当前单词, 移动) -> 是否允许

    Returns:
        MoveSequence，若受限可达集中没有目标则返回 None
    """
    if is_goal(start):
        return MoveSequence(start, start, ())
    parents: Dict[Word, Tuple[Word, Move]] = {}
    visited = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for move, nxt in available_moves(c, current):
            if nxt in visited:
                continue
            if allow is not None and not allow(current, move):
                continue
            visited.add(nxt)
            parents[nxt] = (current, move)
            if is_goal(nxt):
                moves: List[Move] = []
                node = nxt
                while node != start:
                    prev, step = parents[node]
                    moves.append(step)
                    node = prev
                moves.reverse()
                logger.debug(f"BFS from {start} reached {nxt} after {len(visited)} words")
                return MoveSequence(start, nxt, tuple(moves))
            queue.append(nxt)
    logger.debug(f"BFS from {start} exhausted {len(visited)} words without a goal")
    return None


def move_path(c: CartanDatum, i: Word, j: Word) -> MoveSequence:
    """两个约化单词之间的最短移动序列

    Raises:
        NotReducedError: 任一单词不是约化的
        WordMismatchError: 两个单词代表不同元素
    """
    props_i = word_props(c, i)
    props_j = word_props(c, j)
    if not props_i.reduced:
        raise NotReducedError(i.letters)
    if not props_j.reduced:
        raise NotReducedError(j.letters)
    if props_i.element != props_j.element:
        raise WordMismatchError(i.letters, j.letters)
    path = breadth_first_moves(c, i, lambda w: w == j)
    if path is None:
        raise WordMismatchError(i.letters, j.letters)
    return path


# ==================== 凸序与陪集 ====================


def convex_order(c: CartanDatum, i: Word) -> Tuple[PositiveRoot, ...]:
    """β_k = s_{i_1}⋯s_{i_{k−1}}(α_{i_k})，k = 1..N

    Raises:
        NotReducedError: 单词不是约化的
    """
    if not word_props(c, i).reduced:
        raise NotReducedError(i.letters)
    roots: List[PositiveRoot] = []
    for k, letter in enumerate(i.letters):
        beta = c.simple_root(letter).coefficients
        for prev in reversed(i.letters[:k]):
            beta = c.reflect_root(beta, prev)
        roots.append(PositiveRoot(beta))
    return tuple(roots)


def k_plus(i: Word, k: int) -> int:
    """位置 k 之后同一字母的下一个位置，不存在时为 N+1"""
    letter = i.letter_at(k)
    for position in range(k + 1, len(i) + 1):
        if i.letter_at(position) == letter:
            return position
    return len(i) + 1


def k_plus_all(i: Word) -> Tuple[int, ...]:
    return tuple(k_plus(i, k) for k in range(1, len(i) + 1))


def i_star(c: CartanDatum, letter: int) -> int:
    """Dynkin对合：w₀ω_i = −ω_{i*}"""
    c.check_letter(letter)
    w0 = longest_element(c)
    column = [w0.matrix[row][letter - 1] for row in range(c.rank)]
    for index, value in enumerate(column, start=1):
        if value == -1 and sum(abs(x) for x in column) == 1:
            return index
    raise CartanTypeError(f"w0 does not map omega_{letter} to a negative fundamental weight", c.family, c.rank)


@dataclass(frozen=True)
class CosetData:
    """W_î 的最长元与陪集 W_î s_i w₀ 的最短代表元 u(i)"""

    letter: int
    parabolic_longest: Word
    u: Word
    u_element: WeylElement


def minimal_left_coset_rep(element: WeylElement, nodes: FrozenSet[int]) -> WeylElement:
    """W_J x 中的最短元：反复去掉 J 中的左下降"""
    current = element
    while True:
        descents = [j for j in current.left_descents() if j in nodes]
        if not descents:
            return current
        current = current.left_multiply(descents[0])


def coset_data(c: CartanDatum, letter: int) -> CosetData:
    """计算 u(i)，即 W_î s_i w₀ 的最短代表元"""
    c.check_letter(letter)
    others = frozenset(j for j in c.nodes if j != letter)
    start = longest_element(c).left_multiply(letter)
    u_element = minimal_left_coset_rep(start, others)
    u_word = next(reduced_words(c, u_element, limit=1), Word(()))
    return CosetData(
        letter=letter,
        parabolic_longest=longest_parabolic_word(c, others),
        u=u_word,
        u_element=u_element,
    )


def is_minuscule(c: CartanDatum, letter: int, nodes: Optional[Iterable[int]] = None) -> bool:
    """ω_letter^∨ 与每个根的配对都在 {−1,0,1} 中

    Args:
        c: Cartan数据
        letter: 节点
        nodes: 只考虑支撑在这些节点上的子根系（默认全部节点）
    """
    c.check_letter(letter)
    support = set(nodes) if nodes is not None else set(c.nodes)
    for root in c.positive_roots:
        if any(root.coefficient(j) and j not in support for j in c.nodes):
            continue
        if root.coefficient(letter) > 1:
            return False
    return True


__all__ = [
    "PositiveRoot",
    "CartanDatum",
    "cartan_matrix",
    "parse_cartan",
    "weyl_group_order",
    "Word",
    "validate_word",
    "WeylElement",
    "weyl_element",
    "WordProperties",
    "word_props",
    "longest_element",
    "longest_parabolic_word",
    "num_positive_roots",
    "is_reduced_for_w0",
    "require_reduced_w0",
    "reduced_words",
    "MoveKind",
    "Move",
    "apply_move",
    "available_moves",
    "MoveSequence",
    "breadth_first_moves",
    "move_path",
    "convex_order",
    "k_plus",
    "k_plus_all",
    "i_star",
    "CosetData",
    "minimal_left_coset_rep",
    "coset_data",
    "is_minuscule",
]
