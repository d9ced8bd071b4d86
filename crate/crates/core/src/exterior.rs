//! Exterior algebra on the six 1-form generators of a complex 3-torus and
//! the triple-product cubic on its fifteen degree-2 classes.
//!
//! The reference generator order is
//!
//! ```text
//! dz1 < dz2 < dz3 < dzb1 < dzb2 < dzb3
//! ```
//!
//! (`dzbj` denotes the conjugate of `dzj`), every sign in the crate derives
//! from it, and the top form `dz1^dz2^dz3^dzb1^dzb2^dzb3` is normalised
//! to `1`. The degree-2 basis is fixed, in this order:
//!
//! | slot  | class                                             | name            |
//! |-------|---------------------------------------------------|-----------------|
//! | 0-2   | `dzi ^ dzj`, `i < j`                              | `z12 z13 z23`   |
//! | 3-11  | `dzi ^ dzbj`, row-major over `i, j`               | `z1b1 .. z3b3`  |
//! | 12-14 | `dzbi ^ dzbj`, `i < j`                            | `zb1b2 zb1b3 zb2b3` |
//!
//! This ordering is the public coordinate convention for every 15-variable
//! form produced by the crate.

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::cubic::CubicForm;
use crate::field::{FieldElem, FieldTag, Rational};

/// Number of degree-2 basis classes on the 3-torus.
pub const H2_DIM: usize = 15;

/// One of the six 1-form generators.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Generator {
    /// Coordinate index, starting at 1.
    pub index: u8,
    /// Whether this is the conjugate generator.
    pub barred: bool,
}

impl Generator {
    pub fn holomorphic(index: u8) -> Self {
        Generator { index, barred: false }
    }

    pub fn antiholomorphic(index: u8) -> Self {
        Generator { index, barred: true }
    }

    // Unbarred generators sort before barred, then by index.
    fn sort_key(self) -> (bool, u8) {
        (self.barred, self.index)
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "dzb{}", self.index)
        } else {
            write!(f, "dz{}", self.index)
        }
    }
}

/// A signed wedge monomial: either zero or `sign * g1 ^ g2 ^ ... ^ gk`
/// with strictly increasing factors.
///
/// The monomial machinery works for any number of generators; only the
/// degree-2 basis below is specific to the threefold setting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WedgeMonomial {
    Zero,
    Term { sign: i8, factors: Vec<Generator> },
}

impl WedgeMonomial {
    /// The empty product, `+1`.
    pub fn one() -> Self {
        WedgeMonomial::Term { sign: 1, factors: Vec::new() }
    }

    pub fn generator(g: Generator) -> Self {
        WedgeMonomial::Term { sign: 1, factors: vec![g] }
    }

    /// Sorts the factors into canonical order, picking up the parity of the
    /// permutation; a repeated generator collapses to zero.
    pub fn from_factors(mut factors: Vec<Generator>) -> Self {
        let mut sign = 1i8;
        // insertion sort, counting transpositions
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j] < factors[j - 1] {
                factors.swap(j, j - 1);
                sign = -sign;
                j -= 1;
            }
        }
        if factors.windows(2).any(|w| w[0] == w[1]) {
            return WedgeMonomial::Zero;
        }
        WedgeMonomial::Term { sign, factors }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, WedgeMonomial::Zero)
    }

    /// Number of factors; `None` for the zero monomial.
    pub fn degree(&self) -> Option<usize> {
        match self {
            WedgeMonomial::Zero => None,
            WedgeMonomial::Term { factors, .. } => Some(factors.len()),
        }
    }

    pub fn sign(&self) -> i8 {
        match self {
            WedgeMonomial::Zero => 0,
            WedgeMonomial::Term { sign, .. } => *sign,
        }
    }

    /// Wedge product: merges the two sorted factor lists, flipping the sign
    /// once per crossing, and collapses to zero on any repeated generator.
    pub fn wedge(&self, rhs: &WedgeMonomial) -> WedgeMonomial {
        let (ls, lf, rs, rf) = match (self, rhs) {
            (WedgeMonomial::Zero, _) | (_, WedgeMonomial::Zero) => return WedgeMonomial::Zero,
            (
                WedgeMonomial::Term { sign: ls, factors: lf },
                WedgeMonomial::Term { sign: rs, factors: rf },
            ) => (*ls, lf, *rs, rf),
        };
        let mut merged = Vec::with_capacity(lf.len() + rf.len());
        let mut sign = ls * rs;
        let (mut i, mut j) = (0, 0);
        while i < lf.len() && j < rf.len() {
            if lf[i] < rf[j] {
                merged.push(lf[i]);
                i += 1;
            } else if rf[j] < lf[i] {
                // rf[j] moves past the remaining lf factors
                if (lf.len() - i) % 2 == 1 {
                    sign = -sign;
                }
                merged.push(rf[j]);
                j += 1;
            } else {
                return WedgeMonomial::Zero;
            }
        }
        merged.extend_from_slice(&lf[i..]);
        merged.extend_from_slice(&rf[j..]);
        WedgeMonomial::Term { sign, factors: merged }
    }
}

impl fmt::Display for WedgeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WedgeMonomial::Zero => f.write_str("0"),
            WedgeMonomial::Term { sign, factors } => {
                if *sign < 0 {
                    f.write_str("-")?;
                }
                if factors.is_empty() {
                    return f.write_str("1");
                }
                let parts: Vec<String> = factors.iter().map(|g| g.to_string()).collect();
                f.write_str(&parts.join("^"))
            }
        }
    }
}

/// Hodge type of a degree-2 basis class, which determines how a diagonal
/// torus automorphism scales it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum H2Type {
    /// `dzi ^ dzj`
    Holomorphic,
    /// `dzi ^ dzbj`
    Mixed,
    /// `dzbi ^ dzbj`
    Antiholomorphic,
}

/// The ordered 15-element degree-2 basis of the 3-torus.
pub struct H2Basis {
    elements: Vec<WedgeMonomial>,
    names: Vec<String>,
}

impl H2Basis {
    /// The basis in the crate-wide ordering documented at module level.
    pub fn standard() -> &'static H2Basis {
        static BASIS: OnceLock<H2Basis> = OnceLock::new();
        BASIS.get_or_init(|| {
            let mut elements = Vec::with_capacity(H2_DIM);
            let mut names = Vec::with_capacity(H2_DIM);
            let pairs = [(1u8, 2u8), (1, 3), (2, 3)];
            for &(i, j) in &pairs {
                elements.push(WedgeMonomial::from_factors(vec![
                    Generator::holomorphic(i),
                    Generator::holomorphic(j),
                ]));
                names.push(format!("z{i}{j}"));
            }
            for i in 1..=3u8 {
                for j in 1..=3u8 {
                    elements.push(WedgeMonomial::from_factors(vec![
                        Generator::holomorphic(i),
                        Generator::antiholomorphic(j),
                    ]));
                    names.push(format!("z{i}b{j}"));
                }
            }
            for &(i, j) in &pairs {
                elements.push(WedgeMonomial::from_factors(vec![
                    Generator::antiholomorphic(i),
                    Generator::antiholomorphic(j),
                ]));
                names.push(format!("zb{i}b{j}"));
            }
            H2Basis { elements, names }
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, slot: usize) -> &WedgeMonomial {
        &self.elements[slot]
    }

    /// Coordinate name of a slot (`z12`, `z1b2`, `zb1b2`, ...).
    pub fn name(&self, slot: usize) -> &str {
        &self.names[slot]
    }

    /// Slot of a coordinate name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn class_type(&self, slot: usize) -> H2Type {
        match slot {
            0..=2 => H2Type::Holomorphic,
            3..=11 => H2Type::Mixed,
            _ => H2Type::Antiholomorphic,
        }
    }
}

/// Sign of the product of three degree-2 basis classes against the
/// reference top form: `+1`, `-1`, or `0` when a generator repeats.
///
/// Fully symmetric in its arguments since degree-2 monomials commute.
pub fn triple_product(a: usize, b: usize, c: usize) -> i8 {
    let basis = H2Basis::standard();
    basis
        .element(a)
        .wedge(basis.element(b))
        .wedge(basis.element(c))
        .sign()
}

/// The 15-variable rational cubic whose symmetric tensor is
/// [`triple_product`] over the standard degree-2 basis.
pub fn abelian_cubic() -> CubicForm {
    let mut entries = Vec::new();
    for a in 0..H2_DIM {
        for b in a..H2_DIM {
            for c in b..H2_DIM {
                let s = triple_product(a, b, c);
                if s != 0 {
                    entries.push(((a, b, c), FieldElem::from_int(s as i64)));
                }
            }
        }
    }
    CubicForm::from_entries(H2_DIM, FieldTag::Q, entries)
        .expect("triple-product tensor is well formed")
}

/// Convenience sign lookup used in tests and reports: `0` unless the six
/// underlying generators are pairwise distinct.
pub fn triple_product_rational(a: usize, b: usize, c: usize) -> Rational {
    let mut r = Rational::zero();
    match triple_product(a, b, c) {
        0 => {}
        s => r = Rational::from_integer(s.into()),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dz(i: u8) -> WedgeMonomial {
        WedgeMonomial::generator(Generator::holomorphic(i))
    }

    fn dzb(i: u8) -> WedgeMonomial {
        WedgeMonomial::generator(Generator::antiholomorphic(i))
    }

    fn slot(name: &str) -> usize {
        H2Basis::standard().index_of(name).unwrap()
    }

    /// Independent parity oracle: concatenate the generator code sequences
    /// of the three classes and count inversions against the reference
    /// order, with repeats collapsing to zero.
    fn triple_sign_by_inversions(a: usize, b: usize, c: usize) -> i8 {
        let basis = H2Basis::standard();
        let mut codes: Vec<u8> = Vec::new();
        for slot in [a, b, c] {
            match basis.element(slot) {
                WedgeMonomial::Term { sign, factors } => {
                    assert_eq!(*sign, 1, "basis monomials are stored with sign +1");
                    for g in factors {
                        codes.push(if g.barred { g.index + 3 } else { g.index });
                    }
                }
                WedgeMonomial::Zero => unreachable!(),
            }
        }
        for i in 0..codes.len() {
            for j in (i + 1)..codes.len() {
                if codes[i] == codes[j] {
                    return 0;
                }
            }
        }
        let inversions = (0..codes.len())
            .flat_map(|i| ((i + 1)..codes.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| codes[i] > codes[j])
            .count();
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn wedge_of_ordered_generators_is_positive() {
        let w = dz(1).wedge(&dz(2));
        assert_eq!(
            w,
            WedgeMonomial::Term {
                sign: 1,
                factors: vec![Generator::holomorphic(1), Generator::holomorphic(2)],
            }
        );
    }

    #[test]
    fn wedge_transposition_flips_sign() {
        let w = dz(2).wedge(&dz(1));
        assert_eq!(w.sign(), -1);
    }

    #[test]
    fn repeated_generator_kills_the_product() {
        let z12 = dz(1).wedge(&dz(2));
        let z2b1 = dz(2).wedge(&dzb(1));
        assert!(z12.wedge(&z2b1).is_zero());
    }

    #[test]
    fn basis_has_fifteen_named_slots() {
        let b = H2Basis::standard();
        assert_eq!(b.len(), 15);
        assert_eq!(b.name(0), "z12");
        assert_eq!(b.name(3), "z1b1");
        assert_eq!(b.name(9), "z3b1");
        assert_eq!(b.name(14), "zb2b3");
        for s in 0..15 {
            assert_eq!(b.index_of(b.name(s)), Some(s));
        }
    }

    #[test]
    fn frozen_triple_products() {
        assert_eq!(triple_product(slot("z12"), slot("z3b1"), slot("zb2b3")), 1);
        assert_eq!(triple_product(slot("z12"), slot("z2b1"), slot("zb2b3")), 0);
        // one transposition away from the reference order
        assert_eq!(triple_product(slot("z12"), slot("z3b2"), slot("zb1b3")), -1);
        assert_eq!(triple_product(slot("z13"), slot("z2b1"), slot("zb2b3")), -1);
        assert_eq!(triple_product(slot("z23"), slot("z1b1"), slot("zb2b3")), 1);
        assert_eq!(triple_product(slot("z1b1"), slot("z2b2"), slot("z3b3")), -1);
    }

    #[test]
    fn engine_matches_inversion_oracle_on_all_triples() {
        for a in 0..H2_DIM {
            for b in 0..H2_DIM {
                for c in 0..H2_DIM {
                    assert_eq!(
                        triple_product(a, b, c),
                        triple_sign_by_inversions(a, b, c),
                        "triple ({a},{b},{c})"
                    );
                }
            }
        }
    }

    #[test]
    fn triple_product_is_fully_symmetric_and_supported_on_partitions() {
        let basis = H2Basis::standard();
        for a in 0..H2_DIM {
            for b in 0..H2_DIM {
                for c in 0..H2_DIM {
                    let t = triple_product(a, b, c);
                    for (x, y, z) in [
                        (a, c, b),
                        (b, a, c),
                        (b, c, a),
                        (c, a, b),
                        (c, b, a),
                    ] {
                        assert_eq!(t, triple_product(x, y, z));
                    }
                    // nonzero exactly when the six generators are distinct
                    let mut gens = Vec::new();
                    for s in [a, b, c] {
                        if let WedgeMonomial::Term { factors, .. } = basis.element(s) {
                            gens.extend(factors.iter().copied());
                        }
                    }
                    gens.sort();
                    gens.dedup();
                    assert_eq!(t != 0, gens.len() == 6);
                }
            }
        }
    }

    #[test]
    fn abelian_cubic_support_counted_by_enumeration() {
        // independent enumeration of nonzero unordered triples
        let mut expected = 0usize;
        for a in 0..H2_DIM {
            for b in a..H2_DIM {
                for c in b..H2_DIM {
                    if triple_sign_by_inversions(a, b, c) != 0 {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(expected, 15);
        let f = abelian_cubic();
        assert_eq!(f.support_len(), expected);
        let one = FieldElem::from_int(1);
        assert_eq!(
            f.coefficient(slot("z12"), slot("z3b1"), slot("zb2b3")),
            one
        );
        // two purely holomorphic classes always share a dz factor
        assert!(f
            .coefficient(slot("z12"), slot("z13"), slot("zb2b3"))
            .is_zero());
    }
}
