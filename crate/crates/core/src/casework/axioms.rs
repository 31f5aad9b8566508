//! Registry of imported facts.
//!
//! Scripts may cite these by id; the checker records them but never
//! evaluates them. Ids starting with `HYP-` are the standing hypotheses on
//! `E_{C,Z}` rather than imported theorems.

pub struct Axiom {
    pub id: &'static str,
    pub statement: &'static str,
}

macro_rules! registry {
    ($($id:literal => $text:literal,)*) => {
        pub const AXIOMS: &[Axiom] = &[$(Axiom { id: $id, statement: $text },)*];
    };
}

registry! {
    "AX-SERRE" => "h^i(E) = h^{2-i}(E^dual) on a K3 surface",
    "AX-H1NONNEG" => "cohomology dimensions are nonnegative; in particular h^1 >= 0 and h^1 >= -chi when h^0 = h^2 = 0",
    "AX-2CONNECTED" => "if |L| is base point free with L^2 > 0, every member is 2-connected: D1.D2 >= 2 for effective D = D1 + D2",
    "AX-1CONNECTED" => "weak form of connectedness used where only positivity is needed: C.D > 0 for an irreducible curve C with C^2 > 0 and D moving",
    "AX-ELLIPTIC-H1" => "a base point free L with L^2 = 0 is kF for an elliptic curve F, and h^1(L) = k - 1",
    "AX-VA-DEGREE3" => "for h very ample and D nonzero with D^2 >= 0, h.D > 0: |D| is nonempty and h.D >= 3; D^2 = 0, h.D = 3 gives an elliptic pencil",
    "AX-INITIALIZED-CRIT" => "E_{C,Z} is initialized iff h^0(O_X(C - H) (x) J_Z) = 0",
    "AX-BPF-ACM" => "an initialized aCM line bundle B with B^2 >= 2 is base point free",
    "AX-BPF-NEF" => "a base point free line bundle is nef: N.K >= 0 for every effective K",
    "AX-RR-EFFECTIVE" => "D^2 >= -2 and h.D > 0 imply h^0(D) > 0",
    "AX-AMPLE" => "a nonzero effective class has positive degree",
    "AX-HODGE-INDEX" => "D1^2 D2^2 <= (D1.D2)^2 for positive squares; h-perp is negative definite",
    "AX-ULRICH-BOUND" => "an initialized aCM bundle E has h^0(E) <= 4 rk(E)",
    "AX-LM-INVARIANTS" => "c1(E_{C,Z}) = C, c2 = d, h^1 = h^2 = 0, h^0 = g - d + 1 + 2r, chi(End E) = 2(1 - rho)",
    "AX-DESTAB-PAIR" => "d the gonality, rho(g,1,d) < 0: 0 -> M -> E -> N -> 0 with h^0(M), h^0(N) >= 2, N base point free, h^1(M) = h^1(N) = 0, M^2 >= N^2",
    "AX-DESTAB-PAIR-IDEAL" => "E not simple: 0 -> M -> E -> N (x) J_Z' -> 0 with h^0(M), h^0(N) >= 2, N base point free; length Z' = 0 if h^0(M - N) = 0; M^2 >= N^2",
    "AX-EXTENSION-C2" => "for 0 -> M -> E -> N (x) J_Z' -> 0: c1 = M + N and c2 = M.N + length Z'",
    "AX-SPLIT-EXT" => "Ext^1(N, N) = H^1(O_X) = 0, so an extension of N by N splits; h^0(M - N) = 0 forces E = M + N",
    "AX-PENCIL-DEGREE" => "a base point free pencil on a curve of positive genus has degree >= 2",
    "AX-SPLITTING-P1" => "every rank-2 bundle on P^1 is O(a) + O(b)",
    "AX-MINUS2-CURVE" => "an effective class with D^2 = -2 and h.D = 1 is a smooth rational curve",
    "AX-MINUS2-FIXED" => "if B = N + G with G a (-2)-curve and N.G = 0 then h^1(B) != 0",
    "AX-ACM-RESTRICT" => "for E aCM and initialized, h^0(E(-2)) = h^1(E(-2)) = 0, so sections of E(-h-F) restricted to a curve in |B| vanish",
    "AX-LINE-TWIST" => "twists of aCM line bundles by O_X(k) are aCM; O_X(k) is aCM",
    "AX-IRREDUCIBLE-CURVE" => "C irreducible and G an irreducible curve distinct from C give C.G >= 0",
    "AX-LM-EXISTENCE" => "B base point free with h^1(B) = 0 and B^2 = 4: some smooth C1 in |2B| carries a pencil of degree 4 with E = B + B",
    "AX-NONSPLIT-EXT" => "h^1(f - f_j) != 0 gives a nonsplit extension 0 -> O(f) -> E -> O(f_j) -> 0, of Lazarsfeld-Mukai type",
    "AX-RHO-ZERO-CASE" => "boundary case rho(g,1,d) = 0 with a (-2)-curve D, N.D = 1; never arises when rho < 0",
    "AX-LM-GLOBAL-GEN" => "E_{C,Z} is globally generated off the base points of |K_C - Z|",
    "AX-VERY-AMPLE-CRIT" => "L nef with L^2 >= 4 is very ample iff no irreducible E with E^2 = 0 and E.L in {1,2}, no E^2 = 2 with L = 2E, no E^2 = -2 with E.L = 0",
    "HYP-ACM" => "E_{C,Z} is aCM: h^1(E(l)) = 0 for all l",
    "HYP-INITIALIZED" => "E_{C,Z} is initialized: h^0(E) != 0, h^0(E(-1)) = 0",
    "HYP-INDECOMPOSABLE" => "E_{C,Z} is indecomposable",
    "HYP-GENUS" => "C is a smooth curve of genus g >= 3, so C^2 >= 4",
    "HYP-ABS-T" => "C = s h + t B with |t| >= 2",
}

pub fn lookup(id: &str) -> Option<&'static Axiom> {
    AXIOMS.iter().find(|a| a.id == id)
}

pub fn is_known(id: &str) -> bool {
    lookup(id).is_some()
}
