use serde::{Deserialize, Serialize};

/// Which rank-two Frobenius algebra labels the circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theory {
    Khovanov,
    Lee,
}

/// The algebra `Q[X]/(X^2 - t)` with basis `v+ = 1`, `v- = X`.
///
/// `v+` has degree +1 and `v-` degree -1. The counit sends `v+` to 0 and
/// `v-` to 1. For the reduced theory the basepoint circle carries
/// `e = X + λ` with `λ^2 = t`, which satisfies `e·1 = e`, `e·X = λe` and
/// `Δ(e) = e ⊗ e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrobeniusSpec {
    pub name: Theory,
    pub t: i64,
    pub lambda: i64,
}

/// A basis element: `false` is `v+`, `true` is `v-`.
pub type Label = bool;

pub const V_PLUS: Label = false;
pub const V_MINUS: Label = true;

impl FrobeniusSpec {
    pub fn khovanov() -> Self {
        FrobeniusSpec { name: Theory::Khovanov, t: 0, lambda: 0 }
    }

    pub fn lee() -> Self {
        FrobeniusSpec { name: Theory::Lee, t: 1, lambda: 1 }
    }

    pub fn degree(l: Label) -> i64 {
        if l {
            -1
        } else {
            1
        }
    }

    pub fn unit(&self) -> Label {
        V_PLUS
    }

    pub fn counit(&self, l: Label) -> i64 {
        if l {
            1
        } else {
            0
        }
    }

    /// Product of two basis elements as `(label, coefficient)` terms.
    pub fn mul(&self, x: Label, y: Label) -> Vec<(Label, i64)> {
        match (x, y) {
            (false, false) => vec![(V_PLUS, 1)],
            (true, false) | (false, true) => vec![(V_MINUS, 1)],
            (true, true) => {
                if self.t == 0 {
                    vec![]
                } else {
                    vec![(V_PLUS, self.t)]
                }
            }
        }
    }

    /// Coproduct of a basis element as `((left, right), coefficient)` terms.
    pub fn comul(&self, x: Label) -> Vec<((Label, Label), i64)> {
        if !x {
            vec![((V_PLUS, V_MINUS), 1), ((V_MINUS, V_PLUS), 1)]
        } else {
            let mut v = vec![((V_MINUS, V_MINUS), 1)];
            if self.t != 0 {
                v.push(((V_PLUS, V_PLUS), self.t));
            }
            v
        }
    }

    /// `e · x` as a multiple of `e`.
    pub fn basepoint_mul(&self, x: Label) -> i64 {
        if x {
            self.lambda
        } else {
            1
        }
    }

    /// The basepoint element `e` in the basis, as `(label, coefficient)`.
    pub fn basepoint_element(&self) -> Vec<(Label, i64)> {
        let mut v = vec![(V_MINUS, 1)];
        if self.lambda != 0 {
            v.push((V_PLUS, self.lambda));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_frobenius(s: FrobeniusSpec) {
        let all = [V_PLUS, V_MINUS];
        // (ε ⊗ id) Δ = id
        for x in all {
            let mut acc = [0i64; 2];
            for ((l, r), c) in s.comul(x) {
                acc[r as usize] += c * s.counit(l);
            }
            let mut want = [0; 2];
            want[x as usize] = 1;
            assert_eq!(acc, want);
        }
        // Δ m = (m ⊗ id)(id ⊗ Δ)
        for x in all {
            for y in all {
                let mut lhs = [[0i64; 2]; 2];
                for (z, c) in s.mul(x, y) {
                    for ((l, r), d) in s.comul(z) {
                        lhs[l as usize][r as usize] += c * d;
                    }
                }
                let mut rhs = [[0i64; 2]; 2];
                for ((l, r), c) in s.comul(y) {
                    for (z, d) in s.mul(x, l) {
                        rhs[z as usize][r as usize] += c * d;
                    }
                }
                assert_eq!(lhs, rhs);
            }
        }
        // e·e = λ e and λ^2 = t
        assert_eq!(s.lambda * s.lambda, s.t);
        assert_eq!(s.counit(s.unit()), 0);
    }

    #[test]
    fn both_algebras_are_frobenius() {
        check_frobenius(FrobeniusSpec::khovanov());
        check_frobenius(FrobeniusSpec::lee());
        assert!(FrobeniusSpec::khovanov().mul(V_MINUS, V_MINUS).is_empty());
        assert_eq!(FrobeniusSpec::lee().mul(V_MINUS, V_MINUS), vec![(V_PLUS, 1)]);
    }
}
