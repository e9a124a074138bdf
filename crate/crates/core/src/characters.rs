//! Multiplicative and additive characters with exact root-of-unity values.
//!
//! A multiplicative character is indexed by j in [0, q-1) against the fixed
//! generator of the field table: chi_j(gen^a) = zeta_{q-1}^{j a}, with the
//! convention chi(0) = 0 (the trivial character included). The canonical
//! additive character is psi(x) = zeta_p^{Tr(x)}. Values stay exact integer
//! exponents until a caller asks for a complex number.

use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{gcd, lcm};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldTable};

/// An exact character value: zero, or the root of unity zeta_L^e.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root { e: u64, l: u64 },
}

impl CharValue {
    pub fn root(e: i64, l: u64) -> CharValue {
        debug_assert!(l >= 1);
        CharValue::Root {
            e: e.rem_euclid(l as i64) as u64,
            l,
        }
    }

    pub fn one() -> CharValue {
        CharValue::Root { e: 0, l: 1 }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }

    /// Product of two values; exponents are promoted to lcm of the moduli.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: CharValue) -> CharValue {
        match (self, rhs) {
            (CharValue::Zero, _) | (_, CharValue::Zero) => CharValue::Zero,
            (CharValue::Root { e: e1, l: l1 }, CharValue::Root { e: e2, l: l2 }) => {
                let l = lcm(l1, l2);
                let e = (e1 * (l / l1) + e2 * (l / l2)) % l;
                CharValue::Root { e, l }
            }
        }
    }

    pub fn conj(self) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root { e, l } => CharValue::Root { e: (l - e) % l, l },
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root { e, l } => {
                let theta = 2.0 * std::f64::consts::PI * e as f64 / l as f64;
                Complex64::new(theta.cos(), theta.sin())
            }
        }
    }

    /// True for zeta_L^e = 1, i.e. e = 0 in Z/L.
    pub fn is_one(&self) -> bool {
        matches!(self, CharValue::Root { e: 0, .. })
    }
}

/// chi_j over a tabulated field; j = 0 is the trivial character.
#[derive(Clone, Debug)]
pub struct MulCharacter {
    field: Arc<FieldTable>,
    j: u32,
}

impl MulCharacter {
    pub fn new(field: Arc<FieldTable>, j: u64) -> Result<MulCharacter> {
        let order = field.q() as u64 - 1;
        if j >= order {
            return Err(Error::BadCharIndex { j, order });
        }
        Ok(MulCharacter { field, j: j as u32 })
    }

    pub fn field(&self) -> &Arc<FieldTable> {
        &self.field
    }

    pub fn index(&self) -> u32 {
        self.j
    }

    pub fn is_trivial(&self) -> bool {
        self.j == 0
    }

    /// The quadratic character is index (q-1)/2 for odd q.
    pub fn is_quadratic(&self) -> bool {
        let order = self.field.q() as u64 - 1;
        order.is_multiple_of(2) && self.j as u64 == order / 2
    }

    pub fn eval(&self, x: Elem) -> CharValue {
        match self.field.log(x) {
            None => CharValue::Zero,
            Some(a) => {
                let order = self.field.q() as u64 - 1;
                CharValue::Root {
                    e: (self.j as u64 * a as u64) % order,
                    l: order,
                }
            }
        }
    }

    pub fn same_field(&self, other: &MulCharacter) -> bool {
        self.field.spec() == other.field.spec()
    }

    pub fn product(&self, other: &MulCharacter) -> Result<MulCharacter> {
        if !self.same_field(other) {
            return Err(Error::MismatchedFields);
        }
        let order = self.field.q() as u64 - 1;
        Ok(MulCharacter {
            field: self.field.clone(),
            j: ((self.j as u64 + other.j as u64) % order) as u32,
        })
    }

    /// The inverse character, which is also the complex conjugate.
    pub fn inverse(&self) -> MulCharacter {
        let order = self.field.q() as u64 - 1;
        MulCharacter {
            field: self.field.clone(),
            j: ((order - self.j as u64) % order) as u32,
        }
    }

    pub fn conjugate(&self) -> MulCharacter {
        self.inverse()
    }

    pub fn order(&self) -> u64 {
        let group = self.field.q() as u64 - 1;
        group / gcd(self.j as u64, group)
    }

    /// chi(-1); equals (-1)^j for odd q and 1 in characteristic 2.
    pub fn at_minus_one(&self) -> CharValue {
        let minus_one = self.field.neg(1);
        self.eval(minus_one)
    }
}

/// The canonical additive character psi(x) = zeta_p^{Tr(x)}.
#[derive(Clone, Debug)]
pub struct AddCharacter {
    field: Arc<FieldTable>,
}

impl AddCharacter {
    pub fn canonical(field: Arc<FieldTable>) -> AddCharacter {
        AddCharacter { field }
    }

    pub fn field(&self) -> &Arc<FieldTable> {
        &self.field
    }

    pub fn eval(&self, x: Elem) -> CharValue {
        CharValue::Root {
            e: self.field.trace_of(x) as u64,
            l: self.field.p() as u64,
        }
    }
}

/// All q-1 characters of the multiplicative group, in index order.
pub fn enumerate_characters(field: &Arc<FieldTable>, nontrivial_only: bool) -> Vec<MulCharacter> {
    let start = u32::from(nontrivial_only);
    (start..field.q() - 1)
        .map(|j| MulCharacter {
            field: field.clone(),
            j,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn field(p: u32, n: u32) -> Arc<FieldTable> {
        Arc::new(FieldTable::build(p, n, None).unwrap())
    }

    #[test]
    fn trivial_and_unit_values() {
        let f = field(7, 1);
        let chi0 = MulCharacter::new(f.clone(), 0).unwrap();
        for x in f.units() {
            assert!(chi0.eval(x).is_one());
        }
        for j in 0..6 {
            let chi = MulCharacter::new(f.clone(), j).unwrap();
            assert!(chi.eval(1).is_one());
            assert!(chi.eval(0).is_zero());
        }
    }

    #[test]
    fn gf5_quadratic_values() {
        let f = field(5, 1);
        assert_eq!(f.generator(), 2);
        let chi = MulCharacter::new(f, 2).unwrap();
        assert!(chi.is_quadratic());
        assert!(chi.eval(4).is_one()); // zeta_4^{2*2} = 1
        assert_eq!(chi.eval(2), CharValue::Root { e: 2, l: 4 }); // -1
    }

    #[test]
    fn additive_character_examples() {
        let f3 = field(3, 1);
        let psi = AddCharacter::canonical(f3);
        assert!(psi.eval(0).is_one());
        assert_eq!(psi.eval(1), CharValue::Root { e: 1, l: 3 });

        let f9 = field(3, 2);
        let psi9 = AddCharacter::canonical(f9);
        assert!(psi9.eval(3).is_one()); // code(x) has trace 0 under x^2 + 1
    }

    #[test]
    fn character_algebra() {
        let f = field(7, 1);
        let chi3 = MulCharacter::new(f.clone(), 3).unwrap();
        assert_eq!(chi3.order(), 2); // gcd(3, 6) = 3
        assert!(chi3.is_quadratic());

        let chi2 = MulCharacter::new(f.clone(), 2).unwrap();
        assert_eq!(chi3.product(&chi2).unwrap().index(), 5);
        assert_eq!(chi2.inverse().index(), 4);

        // chi_j(-1) = (-1)^j for odd q
        for j in 0..6u64 {
            let chi = MulCharacter::new(f.clone(), j).unwrap();
            let v = chi.at_minus_one().to_complex();
            let expect = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn conjugate_matches_complex_conjugate() {
        let f = field(3, 2);
        for j in 0..8u64 {
            let chi = MulCharacter::new(f.clone(), j).unwrap();
            let bar = chi.inverse();
            for x in f.units() {
                let a = chi.eval(x).to_complex();
                let b = bar.eval(x).to_complex();
                assert!((a.conj() - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn orthogonality_element_side() {
        for (p, n) in [(5u32, 1u32), (7, 1), (3, 2), (2, 4), (3, 3)] {
            let f = field(p, n);
            for chi in enumerate_characters(&f, false) {
                let sum: Complex64 = f.units().map(|x| chi.eval(x).to_complex()).sum();
                let expect = if chi.is_trivial() {
                    (f.q() - 1) as f64
                } else {
                    0.0
                };
                assert!(
                    (sum - Complex64::new(expect, 0.0)).norm() < 1e-9,
                    "chi_{} over GF({})",
                    chi.index(),
                    f.q()
                );
            }
        }
    }

    #[test]
    fn orthogonality_character_side() {
        for (p, n) in [(3u32, 1u32), (7, 1), (3, 2)] {
            let f = field(p, n);
            let chars = enumerate_characters(&f, false);
            assert_eq!(chars.len(), f.q() as usize - 1);
            for x in f.units() {
                let sum: Complex64 = chars.iter().map(|c| c.eval(x).to_complex()).sum();
                let expect = if x == 1 { (f.q() - 1) as f64 } else { 0.0 };
                assert!((sum - Complex64::new(expect, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn additive_character_is_nontrivial_and_additive() {
        for (p, n) in [(3u32, 2u32), (5, 1), (2, 3)] {
            let f = field(p, n);
            let psi = AddCharacter::canonical(f.clone());
            assert!(f.elements().any(|x| f.trace_of(x) != 0));
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(psi.eval(f.add(x, y)), psi.eval(x).mul(psi.eval(y)),);
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_index() {
        let f = field(5, 1);
        assert!(matches!(
            MulCharacter::new(f, 4),
            Err(Error::BadCharIndex { j: 4, order: 4 })
        ));
    }

    proptest! {
        #[test]
        fn multiplicativity_gf9(j in 0u64..8, x in 1u32..9, y in 1u32..9) {
            let f = field(3, 2);
            let chi = MulCharacter::new(f.clone(), j).unwrap();
            prop_assert_eq!(chi.eval(f.mul(x, y)), chi.eval(x).mul(chi.eval(y)));
        }

        #[test]
        fn charvalue_mul_promotes(e1 in 0i64..12, l1 in 1u64..13, e2 in 0i64..12, l2 in 1u64..13) {
            let a = CharValue::root(e1, l1);
            let b = CharValue::root(e2, l2);
            let prod = a.mul(b).to_complex();
            let direct = a.to_complex() * b.to_complex();
            prop_assert!((prod - direct).norm() < 1e-9);
            if let CharValue::Root { e, l } = a.mul(b) {
                prop_assert!(e < l);
            }
        }
    }
}
