"""
E2E 测试模块

端到端测试验证完整的任务执行流程。
"""
