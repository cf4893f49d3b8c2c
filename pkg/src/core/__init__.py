"""Core exact algebra for the Nilmetric Workbench"""
