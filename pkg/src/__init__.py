"""
compton-ledger のクリーンアーキテクチャ実装
"""
