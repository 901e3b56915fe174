"""
定数ファイルのインフラストラクチャパッケージ
"""
