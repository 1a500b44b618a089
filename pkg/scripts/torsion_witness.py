"""Show the 2-torsion class in Ext^1(Sym^2, Lambda^2) over S(2,2) and its effect mod 2."""
from intschur import polyrep as pr
from intschur.qha import PrimeField, ext_space, hom_space

S = pr.schur_module((2,), 2)
L = pr.schur_module((1, 1), 2)
print("Ext over Z:   ", ext_space(S.module, L.module, 2).groups)
A2 = S.module.algebra.reduce_mod(2)
S2, L2 = S.module.reduce_mod(2, A2), L.module.reduce_mod(2, A2)
print("Hom over F_2: ", hom_space(S2, L2, PrimeField(2)).rank)
