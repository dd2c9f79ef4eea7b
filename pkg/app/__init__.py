"""StringCone - 弦锥不等式的精确计算

由最长Weyl群元素约化单词上的簇图表势函数计算弦锥的定义不等式，
判定冗余并扫描多重性/冗余猜想。
"""

__version__ = "0.1.0"
__description__ = "Exact string-cone inequalities from cluster potentials, with redundancy analysis"

__all__ = [
    "__version__",
    "__description__",
]
