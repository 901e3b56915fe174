"""
ドメインレイヤーのパッケージ
""" 