"""
インフラストラクチャレイヤーを提供するパッケージ
""" 