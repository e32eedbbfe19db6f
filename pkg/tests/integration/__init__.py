"""
集成测试模块

测试多个组件之间的交互和集成。
"""
