"""
wallislab test package
"""
