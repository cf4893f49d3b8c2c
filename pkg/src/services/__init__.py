"""
Services module for the Nilmetric Workbench.
"""
