"""
ドメインインターフェースを提供するパッケージ
""" 