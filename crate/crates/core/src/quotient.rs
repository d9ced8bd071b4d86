//! Cyclic diagonal automorphisms of the 3-torus, their induced action on
//! the fifteen degree-2 classes, invariant subspaces, and the quotient
//! cubic obtained by restricting the torus cubic to the invariants and
//! scaling by the group order.

use std::collections::BTreeMap;

use crate::cubic::{CubicForm, Point};
use crate::error::{Error, Result};
use crate::exterior::{abelian_cubic, H2Basis, H2Type, H2_DIM};
use crate::field::{FieldElem, FieldTag};
use crate::linalg::FieldMatrix;

/// The cyclic group generated by one scalar acting diagonally on the three
/// torus coordinates. The generator must be a root of unity; the group
/// order is its multiplicative order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagonalAction {
    zeta: FieldElem,
    order: u32,
}

impl DiagonalAction {
    pub fn new(zeta: FieldElem) -> Result<Self> {
        let order = zeta.multiplicative_order()?;
        Ok(DiagonalAction { zeta, order })
    }

    /// Parses the generator names accepted on the command line:
    /// `1`, `-1`, `i`, `-omega`.
    pub fn from_name(name: &str) -> Result<Self> {
        let zeta = match name {
            "1" => FieldElem::from_int(1),
            "-1" => FieldElem::from_int(-1),
            "i" => FieldElem::i(),
            "-omega" => FieldElem::omega().neg(),
            other => {
                return Err(Error::Parse(format!(
                    "unknown generator `{other}` (expected 1, -1, i or -omega)"
                )))
            }
        };
        Self::new(zeta)
    }

    pub fn zeta(&self) -> &FieldElem {
        &self.zeta
    }

    /// The group order, which is also the degree of the quotient map.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Eigenvalue of the generator on each degree-2 basis class:
    /// `zeta^2` on `dzi^dzj`, `zeta * conj(zeta)` on `dzi^dzbj`, and
    /// `conj(zeta)^2` on `dzbi^dzbj`.
    pub fn h2_eigenvalues(&self) -> Vec<FieldElem> {
        let basis = H2Basis::standard();
        let conj = self.zeta.conjugate();
        let sq = self.zeta.mul(&self.zeta).expect("same tag");
        let mixed = self.zeta.mul(&conj).expect("same tag");
        let conj_sq = conj.mul(&conj).expect("same tag");
        (0..H2_DIM)
            .map(|slot| match basis.class_type(slot) {
                H2Type::Holomorphic => sq.clone(),
                H2Type::Mixed => mixed.clone(),
                H2Type::Antiholomorphic => conj_sq.clone(),
            })
            .collect()
    }

    /// The induced action on degree-2 classes as a 15x15 diagonal matrix
    /// over the generator's field.
    pub fn induced_action_on_h2(&self) -> FieldMatrix {
        FieldMatrix::diagonal(&self.h2_eigenvalues(), self.zeta.tag())
            .expect("eigenvalues share the generator's tag")
    }

    /// The eigenvalue-1 subspace, spanned by distinguished basis classes
    /// since the action is diagonal on the basis.
    pub fn invariant_subspace(&self) -> InvariantInclusion {
        let one = FieldElem::one(self.zeta.tag());
        let indices = self
            .h2_eigenvalues()
            .iter()
            .enumerate()
            .filter(|(_, ev)| **ev == one)
            .map(|(slot, _)| slot)
            .collect();
        InvariantInclusion { indices }
    }

    /// The quotient cubic: the torus cubic restricted to the invariant
    /// coordinates and multiplied by the group order. Coefficients stay
    /// rational.
    pub fn quotient_cubic(&self) -> CubicForm {
        let inclusion = self.invariant_subspace();
        let f_a = abelian_cubic();
        let order = FieldElem::from_int(self.order as i64);
        // position of each invariant slot in the sub-coordinates
        let back: BTreeMap<usize, usize> = inclusion
            .indices
            .iter()
            .enumerate()
            .map(|(sub, &slot)| (slot, sub))
            .collect();
        let mut entries = Vec::new();
        for (key, t) in f_a.entries() {
            let (Some(&a), Some(&b), Some(&c)) =
                (back.get(&key[0]), back.get(&key[1]), back.get(&key[2]))
            else {
                continue;
            };
            entries.push(((a, b, c), order.mul(t).expect("rational product")));
        }
        CubicForm::from_entries(inclusion.sub_dim(), FieldTag::Q, entries)
            .expect("restricted tensor is well formed")
    }
}

/// Inclusion of the invariant subspace into the fifteen degree-2
/// coordinates; the columns are distinguished basis vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantInclusion {
    indices: Vec<usize>,
}

impl InvariantInclusion {
    pub fn sub_dim(&self) -> usize {
        self.indices.len()
    }

    /// Ascending slots of the invariant basis classes.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// The 15 x sub_dim inclusion matrix over the requested field.
    pub fn matrix(&self, tag: FieldTag) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(H2_DIM, self.sub_dim(), tag);
        for (col, &slot) in self.indices.iter().enumerate() {
            m.set(slot, col, FieldElem::one(tag)).expect("tags match");
        }
        m
    }

    /// Maps sub-coordinates to the ambient fifteen coordinates.
    pub fn include_point(&self, p: &Point) -> Result<Point> {
        if p.len() != self.sub_dim() {
            return Err(Error::DimensionMismatch { expected: self.sub_dim(), got: p.len() });
        }
        let mut coords = vec![FieldElem::zero(p.tag()); H2_DIM];
        for (sub, &slot) in self.indices.iter().enumerate() {
            coords[slot] = p.coord(sub).clone();
        }
        Point::new(p.tag(), coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use num_bigint::BigInt;

    fn slot(name: &str) -> usize {
        H2Basis::standard().index_of(name).unwrap()
    }

    #[test]
    fn orders_are_inferred_from_the_generator() {
        assert_eq!(DiagonalAction::from_name("1").unwrap().order(), 1);
        assert_eq!(DiagonalAction::from_name("-1").unwrap().order(), 2);
        assert_eq!(DiagonalAction::from_name("i").unwrap().order(), 4);
        assert_eq!(DiagonalAction::from_name("-omega").unwrap().order(), 6);
        assert!(DiagonalAction::from_name("q").is_err());
        assert!(DiagonalAction::new(FieldElem::from_int(2)).is_err());
    }

    #[test]
    fn eigenvalues_for_order_four_generator() {
        let act = DiagonalAction::new(FieldElem::i()).unwrap();
        let ev = act.h2_eigenvalues();
        let minus_one = FieldElem::from_int(-1).widen(FieldTag::QI).unwrap();
        let one = FieldElem::one(FieldTag::QI);
        assert_eq!(ev[slot("z12")], minus_one);
        assert_eq!(ev[slot("z1b1")], one);
        assert_eq!(ev[slot("zb1b2")], minus_one);
    }

    #[test]
    fn minus_one_acts_trivially_on_degree_two() {
        let act = DiagonalAction::from_name("-1").unwrap();
        let one = FieldElem::one(FieldTag::Q);
        assert!(act.h2_eigenvalues().iter().all(|ev| *ev == one));
    }

    #[test]
    fn order_six_generator_fixes_exactly_the_mixed_classes() {
        let act = DiagonalAction::from_name("-omega").unwrap();
        let ev = act.h2_eigenvalues();
        let one = FieldElem::one(FieldTag::QOmega);
        // (-omega)^2 = omega^2 on holomorphic classes, 1 on mixed
        let omega_sq = FieldElem::omega().pow(2);
        assert_eq!(ev[slot("z12")], omega_sq);
        assert_eq!(ev[slot("z2b3")], one);
        let inv = act.invariant_subspace();
        assert_eq!(inv.sub_dim(), 9);
        assert_eq!(inv.indices(), (3..12).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn invariants_of_order_four_and_order_six_actions_coincide() {
        let x4 = DiagonalAction::from_name("i").unwrap().invariant_subspace();
        let x6 = DiagonalAction::from_name("-omega").unwrap().invariant_subspace();
        assert_eq!(x4.indices(), x6.indices());
        assert_eq!(x4.sub_dim(), 9);
    }

    #[test]
    fn trivial_action_keeps_everything() {
        let act = DiagonalAction::from_name("1").unwrap();
        assert_eq!(act.invariant_subspace().sub_dim(), 15);
        assert_eq!(act.quotient_cubic(), abelian_cubic());
    }

    #[test]
    fn order_two_action_doubles_the_cubic() {
        let act = DiagonalAction::from_name("-1").unwrap();
        let f = act.quotient_cubic();
        let f_a = abelian_cubic();
        assert_eq!(f.m(), 15);
        for (key, t) in f_a.entries() {
            let doubled = t.mul(&FieldElem::from_int(2)).unwrap();
            assert_eq!(f.coefficient(key[0], key[1], key[2]), doubled);
        }
        assert_eq!(f.support_len(), f_a.support_len());
    }

    #[test]
    fn induced_action_is_multiplicative() {
        let basis = H2Basis::standard();
        for name in ["i", "-omega", "-1"] {
            let act = DiagonalAction::from_name(name).unwrap();
            let m = act.induced_action_on_h2();
            for j in 1..=act.order() {
                let z = act.zeta().pow(j);
                let conj = z.conjugate();
                let got = m.pow(j).unwrap();
                for s in 0..H2_DIM {
                    let expected = match basis.class_type(s) {
                        H2Type::Holomorphic => z.mul(&z).unwrap(),
                        H2Type::Mixed => z.mul(&conj).unwrap(),
                        H2Type::Antiholomorphic => conj.mul(&conj).unwrap(),
                    };
                    assert_eq!(*got.get(s, s), expected);
                }
            }
        }
    }

    #[test]
    fn quotient_evaluation_matches_scaled_ambient_evaluation() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(17);
        let f_a = abelian_cubic();
        for name in ["1", "-1", "i", "-omega"] {
            let act = DiagonalAction::from_name(name).unwrap();
            let f_z = act.quotient_cubic();
            let inc = act.invariant_subspace();
            let order = FieldElem::from_int(act.order() as i64);
            for _ in 0..20 {
                let coords: Vec<FieldElem> = (0..inc.sub_dim())
                    .map(|_| FieldElem::from_int(rng.gen_range(-4..=4)))
                    .collect();
                let p = Point::new(FieldTag::Q, coords).unwrap();
                let lifted = inc.include_point(&p).unwrap();
                let lhs = f_z.evaluate(&p).unwrap();
                let rhs = order.mul(&f_a.evaluate(&lifted).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn quotient_cubic_of_order_four_action_is_a_determinant_multiple() {
        // independent expansion of det over the mixed coordinates
        // y[3*(i-1)+(j-1)] is the coefficient of dzi^dzbj
        let f_z = DiagonalAction::from_name("i").unwrap().quotient_cubic();
        assert_eq!(f_z.m(), 9);
        let perms: [( [usize; 3], i64); 6] = [
            ([0, 1, 2], 1),
            ([0, 2, 1], -1),
            ([1, 0, 2], -1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([2, 1, 0], -1),
        ];
        // polynomial coefficient of each det monomial in F_Z must be 4*c*sgn
        // with a single constant c; freeze c = -6
        let mut derived_c: Option<Rational> = None;
        let mut support = 0usize;
        for (perm, sgn) in perms {
            let vars = [perm[0], 3 + perm[1], 6 + perm[2]];
            let key = {
                let mut k = vars;
                k.sort();
                k
            };
            support += 1;
            // distinct indices: polynomial coefficient = 6 * tensor entry
            let coeff = f_z
                .coefficient(key[0], key[1], key[2])
                .mul(&FieldElem::from_int(6))
                .unwrap();
            let expected_sign = Rational::from_integer(BigInt::from(sgn));
            let ratio = coeff.re() / (expected_sign * Rational::from_integer(BigInt::from(4)));
            match &derived_c {
                None => derived_c = Some(ratio),
                Some(c) => assert_eq!(*c, ratio),
            }
        }
        assert_eq!(f_z.support_len(), support);
        assert_eq!(
            derived_c.unwrap(),
            Rational::from_integer(BigInt::from(-6))
        );
    }

    #[test]
    fn determinant_covariance_of_the_order_four_quotient() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(23);
        let f_z = DiagonalAction::from_name("i").unwrap().quotient_cubic();
        let mut checked = 0;
        while checked < 5 {
            let mut a = FieldMatrix::zeros(3, 3, FieldTag::Q);
            let mut b = FieldMatrix::zeros(3, 3, FieldTag::Q);
            for r in 0..3 {
                for c in 0..3 {
                    a.set(r, c, FieldElem::from_int(rng.gen_range(-2..=2))).unwrap();
                    b.set(r, c, FieldElem::from_int(rng.gen_range(-2..=2))).unwrap();
                }
            }
            let (da, db) = (a.determinant().unwrap(), b.determinant().unwrap());
            if da.is_zero() || db.is_zero() {
                continue;
            }
            // substitution x[i][j] -> sum_{k,l} A[k][i] B[l][j] x[k][l]
            let mut l = FieldMatrix::zeros(9, 9, FieldTag::Q);
            for k in 0..3 {
                for lidx in 0..3 {
                    for i in 0..3 {
                        for j in 0..3 {
                            let v = a.get(k, i).mul(b.get(lidx, j)).unwrap();
                            l.set(3 * k + lidx, 3 * i + j, v).unwrap();
                        }
                    }
                }
            }
            let transformed = f_z.base_change(&l).unwrap();
            let scale = da.mul(&db).unwrap();
            for (key, t) in f_z.entries() {
                assert_eq!(
                    transformed.coefficient(key[0], key[1], key[2]),
                    t.mul(&scale).unwrap()
                );
            }
            assert_eq!(transformed.support_len(), f_z.support_len());
            checked += 1;
        }
    }

    #[test]
    fn inclusion_matrix_columns_are_unit_vectors() {
        let inc = DiagonalAction::from_name("i").unwrap().invariant_subspace();
        let m = inc.matrix(FieldTag::Q);
        assert_eq!((m.rows(), m.cols()), (15, 9));
        for col in 0..9 {
            let ones = (0..15)
                .filter(|&r| m.get(r, col).is_one())
                .collect::<Vec<_>>();
            assert_eq!(ones, vec![inc.indices()[col]]);
        }
    }
}
