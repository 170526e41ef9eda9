"""
Kaehler-Einstein geometry of the unit ball and the Siegel upper half-space.
"""
