"""Exact engine for quantum Adams operators and p-curvatures of Kahler
q-difference connections on hypertoric spaces, with cotangent bundles of
projective space as the worked family.

Everything is computed over exact coefficient rings: Z[q]/(q^k - 1) split
into cyclotomic component fields, rational Laurent polynomials in the
equivariant and Novikov variables, and truncated operator series.  No
floating point anywhere in the computational path.
"""

__version__ = "0.1.0"
