"""
ドメインエンティティのパッケージ
""" 