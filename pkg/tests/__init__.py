"""测试模块

Spec2Test项目的测试套件。
"""
