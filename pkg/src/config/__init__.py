"""
設定管理パッケージ
""" 