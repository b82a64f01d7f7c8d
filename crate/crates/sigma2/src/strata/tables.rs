//! The polynomial data of the stratification: Δ, Γ, the vector-field matrix V, and the
//! coefficient tables φ, ψ of the tangency identities. Variables are (λ₄, λ₆, λ₈, λ₁₀).

use super::poly::{t, tq, Poly, Term};

pub const WEIGHTS: [u32; 4] = [4, 6, 8, 10];

const DELTA: [Term<4>; 19] = [
    t(3125, [0, 0, 0, 4]),
    t(-3750, [1, 1, 0, 3]),
    t(2000, [1, 0, 2, 2]),
    t(2250, [0, 2, 1, 2]),
    t(-1600, [0, 1, 3, 1]),
    t(256, [0, 0, 5, 0]),
    t(-900, [3, 0, 1, 2]),
    t(825, [2, 2, 0, 2]),
    t(560, [2, 1, 2, 1]),
    t(-630, [1, 3, 1, 1]),
    t(108, [0, 5, 0, 1]),
    t(-128, [2, 0, 4, 0]),
    t(144, [1, 2, 3, 0]),
    t(-27, [0, 4, 2, 0]),
    t(108, [5, 0, 0, 2]),
    t(-72, [4, 1, 1, 1]),
    t(16, [3, 3, 0, 1]),
    t(16, [4, 0, 3, 0]),
    t(-4, [3, 2, 2, 0]),
];

const GAMMA1: [Term<4>; 5] = [
    t(50, [0, 1, 0, 1]),
    t(-80, [0, 0, 2, 0]),
    t(36, [2, 0, 1, 0]),
    t(-27, [1, 2, 0, 0]),
    t(-4, [4, 0, 0, 0]),
];
const GAMMA2: [Term<4>; 5] = [
    t(200, [0, 0, 1, 1]),
    t(-40, [2, 0, 0, 1]),
    t(-36, [1, 1, 1, 0]),
    t(27, [0, 3, 0, 0]),
    t(4, [3, 1, 0, 0]),
];
const GAMMA3: [Term<4>; 6] = [
    t(625, [0, 0, 0, 2]),
    t(-720, [1, 0, 2, 0]),
    t(135, [0, 2, 1, 0]),
    t(308, [3, 0, 1, 0]),
    t(-216, [2, 2, 0, 0]),
    t(-32, [5, 0, 0, 0]),
];
const GAMMA4: [Term<4>; 7] = [
    t(1600, [0, 0, 3, 0]),
    t(-1040, [2, 0, 2, 0]),
    t(360, [1, 2, 1, 0]),
    t(135, [0, 4, 0, 0]),
    t(224, [4, 0, 1, 0]),
    t(-88, [3, 2, 0, 0]),
    t(-16, [6, 0, 0, 0]),
];

pub fn delta_poly() -> Poly<4> {
    Poly::new(&DELTA)
}

pub fn gamma_polys() -> [Poly<4>; 4] {
    [
        Poly::new(&GAMMA1),
        Poly::new(&GAMMA2),
        Poly::new(&GAMMA3),
        Poly::new(&GAMMA4),
    ]
}

const L4: [u8; 4] = [1, 0, 0, 0];
const L6: [u8; 4] = [0, 1, 0, 0];
const L8: [u8; 4] = [0, 0, 1, 0];
const L10: [u8; 4] = [0, 0, 0, 1];

fn p(terms: &[Term<4>]) -> Poly<4> {
    Poly::new(terms)
}

/// V(λ): row k holds the coefficients of ℓ_{2k} on (∂λ₄, ∂λ₆, ∂λ₈, ∂λ₁₀).
pub fn v_polys() -> [[Poly<4>; 4]; 4] {
    [
        [
            p(&[t(4, L4)]),
            p(&[t(6, L6)]),
            p(&[t(8, L8)]),
            p(&[t(10, L10)]),
        ],
        [
            p(&[t(6, L6)]),
            p(&[t(8, L8), tq(-12, 5, [2, 0, 0, 0])]),
            p(&[t(10, L10), tq(-8, 5, [1, 1, 0, 0])]),
            p(&[tq(-4, 5, [1, 0, 1, 0])]),
        ],
        [
            p(&[t(8, L8)]),
            p(&[t(10, L10), tq(-8, 5, [1, 1, 0, 0])]),
            p(&[t(4, [1, 0, 1, 0]), tq(-12, 5, [0, 2, 0, 0])]),
            p(&[t(6, [1, 0, 0, 1]), tq(-6, 5, [0, 1, 1, 0])]),
        ],
        [
            p(&[t(10, L10)]),
            p(&[tq(-4, 5, [1, 0, 1, 0])]),
            p(&[t(6, [1, 0, 0, 1]), tq(-6, 5, [0, 1, 1, 0])]),
            p(&[t(4, [0, 1, 0, 1]), tq(-8, 5, [0, 0, 2, 0])]),
        ],
    ]
}

/// φ with ℓₖΔ = φₖΔ.
pub fn phi_polys() -> [Poly<4>; 4] {
    [
        p(&[t(40, [0; 4])]),
        Poly::zero(),
        p(&[t(12, L4)]),
        p(&[t(4, L6)]),
    ]
}

/// ψ₀, ψ₂, ψ₄, ψ₆ with ℓₖΓ = ψₖΓ.
pub fn psi_polys() -> [[[Poly<4>; 4]; 4]; 4] {
    let z = Poly::zero;
    let c = |n: i64, d: i64| p(&[tq(n, d, [0; 4])]);
    let psi0 = [
        [c(16, 1), z(), z(), z()],
        [z(), c(18, 1), z(), z()],
        [z(), z(), c(20, 1), z()],
        [z(), z(), z(), c(24, 1)],
    ];
    let psi2 = [
        [z(), c(-6, 1), z(), z()],
        [p(&[tq(-116, 5, L4)]), z(), c(16, 5), z()],
        [p(&[t(27, L6)]), p(&[t(-77, L4)]), z(), z()],
        [
            p(&[t(72, [1, 1, 0, 0])]),
            p(&[t(240, L8), t(-56, [2, 0, 0, 0])]),
            z(),
            z(),
        ],
    ];
    let psi4 = [
        [p(&[tq(-32, 5, L4)]), z(), c(4, 5), z()],
        [p(&[tq(33, 5, L6)]), p(&[t(5, L4)]), z(), z()],
        [
            p(&[t(24, L8), tq(-432, 5, [2, 0, 0, 0])]),
            z(),
            p(&[t(12, L4)]),
            c(-12, 5),
        ],
        [
            p(&[
                t(144, [1, 0, 1, 0]),
                t(108, [0, 2, 0, 0]),
                tq(-176, 5, [3, 0, 0, 0]),
            ]),
            z(),
            z(),
            p(&[tq(44, 5, L4)]),
        ],
    ];
    let psi6 = [
        [p(&[tq(-7, 5, L6)]), p(&[tq(-7, 5, L4)]), z(), z()],
        [
            p(&[t(4, L8), tq(-128, 25, [2, 0, 0, 0])]),
            z(),
            p(&[tq(16, 25, L4)]),
            z(),
        ],
        [
            p(&[t(100, L10), tq(-81, 5, [1, 1, 0, 0])]),
            p(&[t(-6, L8), tq(-81, 5, [2, 0, 0, 0])]),
            z(),
            z(),
        ],
        [
            p(&[t(72, [0, 1, 1, 0]), tq(-48, 5, [2, 1, 0, 0])]),
            p(&[t(40, [1, 0, 1, 0]), tq(-48, 5, [3, 0, 0, 0])]),
            z(),
            z(),
        ],
    ];
    [psi0, psi2, psi4, psi6]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sato_weights_are_homogeneous() {
        assert_eq!(delta_poly().weighted_degree(WEIGHTS), Some(40));
        let want = [16, 18, 20, 24];
        for (g, w) in gamma_polys().iter().zip(want) {
            assert_eq!(g.weighted_degree(WEIGHTS), Some(w));
        }
        // V_kj has weight 2k + w_j
        for (k, row) in v_polys().iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert_eq!(
                    e.weighted_degree(WEIGHTS),
                    Some(2 * k as u32 + WEIGHTS[j]),
                    "V[{k}][{j}]"
                );
            }
        }
    }
}
