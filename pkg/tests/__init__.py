"""
Test package for GetVerbrauch.
""" 