"""
関係式ファイルのインフラストラクチャパッケージ
"""
