"""
レポート出力のインフラストラクチャパッケージ
"""
