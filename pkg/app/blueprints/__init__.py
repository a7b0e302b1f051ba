"""
Blueprints Package
Command groups registered on the application CLI
"""
