"""Human-readable descriptions attached to every reported check (the ``paper_ref`` field)."""

REFS = {
    "jacobi": "Jacobi identity of the structure constants",
    "semidirect": "semidirect product of a subalgebra and an ideal via a representation by derivations",
    "brackets": "bracket table as displayed for this example",
    "integrability": "integrability of J and E versus abelian k with j a 1-cocycle",
    "canonical_connection": "canonical connection: torsion-free, flat, parallelizing F, J and E",
    "parallel_connection": "torsion-free connections parallelizing two structures exist exactly when J is integrable",
    "product_connection": "torsion-free connection assembled from connections on the factors",
    "lsa_table": "LSA induced on h by a totally real complex structure",
    "lsa_compatible": "LSA whose commutator is the given Lie bracket",
    "lsa_axioms": "left symmetry, left multiplication homomorphism and alpha homomorphism agree",
    "semidirect_table": "semidirect product and totally real complex structure built from an LSA",
    "roundtrip": "affine structures on h, totally real J and E, and parallelizing connections correspond",
    "closedness": "closedness of the fundamental forms of J, E, F and its algebraic criterion",
    "kahler": "almost Kähler with skew induced representation is Kähler",
    "solvability": "Lie algebras carrying a compatible LSA are solvable",
    "nilpotent_base": "integrable totally real structure on a tangent algebra forces a nilpotent base",
    "cocycles": "1-cocycles of a representation; nonsingular ones give totally real structures",
    "special_classes": "bi-invariant and abelian complex and paracomplex structures",
    "symplectic": "symplectic form as a nonsingular skew ad*-cocycle",
    "chu": "affine structure of a symplectic Lie algebra",
    "hermitian": "Hermitian complex structure on a cotangent algebra from a symplectic form",
    "totally_real": "totally real subspaces of a complex structure",
    "structure": "complex structure as displayed for this example",
}
