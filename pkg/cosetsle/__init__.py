"""
cosetsle - coset CFT martingale constraints and SLE Monte Carlo checks.

Decides by exact algebra which coset primary fields admit an SLE
boundary-condition-changing interpretation, and tests the answers
numerically with Loewner evolution plus a restricted group walk.
"""

__version__ = "0.1.0"
