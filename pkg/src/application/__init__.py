"""
アプリケーションレイヤーのパッケージ
""" 