"""
組み込みの関係式と派生定数の規則を提供するパッケージ
"""
