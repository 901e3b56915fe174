"""
アプリケーションサービスのパッケージ
""" 