"""gini-qudit 测试套件"""
