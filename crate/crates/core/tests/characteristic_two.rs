//! Fields of characteristic 2 with more than two elements carry a
//! hypervaluation onto the two-element hypergroup `{e, x}`, `x*x = {e, x}`,
//! ordered `x < e`: `w(1) = e` and `w(a) = x` for every other nonzero `a`.
//! Its `O_w = {0, 1}` is not a valuation hyperring and `F*/U_w = F*` admits
//! no compatible linear order, so neither the valuation-hyperring statement
//! nor the decomposition through an ordered abelian group holds for it.
//!
//! The axioms are checked twice: by a brute-force oracle over raw `GF(2^k)`
//! arithmetic, and by the library.

use hyperkit::enumeration::{enumerate_hyperfields, enumerate_hypervaluations, enumerate_ordered_hypergroups, Budget};
use hyperkit::hypergroup::{verify_canonical, HyperOpTable};
use hyperkit::hyperring::{verify_hyperfield, FiniteHyperfield, HyperringData};
use hyperkit::morphism::find_isomorphism;
use hyperkit::order::{check_fvk_properties, OrderRelation, OrderedCanonicalHypergroup};
use hyperkit::valuation::{
    check_hypervaluation, check_valpro, decompose, proposition_checks, FiniteHypervaluation, Value, G_LINEAR,
    O_VALUATION_RING,
};
use hyperkit::{HyperError, SubsetMask};

/// Carry-less product modulo an irreducible polynomial of degree `k`.
fn gf_mul(mut a: usize, mut b: usize, k: u32, poly: usize) -> usize {
    let mut r = 0;
    while b > 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> k & 1 == 1 {
            a ^= poly;
        }
    }
    r
}

const FIELDS: [(u32, usize); 3] = [(2, 0b111), (3, 0b1011), (4, 0b10011)];

/// Rank in `x < e < ∞`.
fn rank(a: usize) -> u8 {
    match a {
        0 => 2,
        1 => 1,
        _ => 0,
    }
}

#[test]
fn oracle_confirms_axioms_and_failure() {
    for (k, poly) in FIELDS {
        let q = 1usize << k;
        let mul = |a, b| gf_mul(a, b, k, poly);
        // Field sanity: every nonzero element has an inverse.
        for a in 1..q {
            assert_eq!((1..q).filter(|&b| mul(a, b) == 1).count(), 1);
        }
        // The value of a: 0 -> ∞, 1 -> e, else x; H-product of values as ranks.
        let w = rank;
        let h_mul = |s: u8, t: u8| -> Vec<u8> {
            match (s, t) {
                (1, t) => vec![t],
                (s, 1) => vec![s],
                _ => vec![0, 1],
            }
        };
        for a in 0..q {
            assert_eq!(w(a) == 2, a == 0, "V1");
            assert_eq!(w(a), w(a), "V2: -a = a in characteristic 2");
            for b in 1..q {
                if a != 0 {
                    assert!(h_mul(w(a), w(b)).contains(&w(mul(a, b))), "V3 at {a}, {b}");
                }
                assert!(w(a ^ b) >= w(a).min(w(b)), "V4 at {a}, {b}");
            }
        }
        // Compatibility of x < e on {e, x}: a <= b => a*c ↗ b*c.
        for (a, b) in [(0u8, 1u8), (0, 0), (1, 1)] {
            for c in [0u8, 1] {
                let (lhs, rhs) = (h_mul(a, c), h_mul(b, c));
                assert!(rhs.iter().all(|&y| lhs.iter().any(|&z| z <= y)));
            }
        }
        // O_w = {0, 1} misses both 2 and its inverse.
        let inv2 = (1..q).find(|&b| mul(2, b) == 1).unwrap();
        assert!(w(2) < 1 && w(inv2) < 1);
    }
}

fn gf_hyperfield(k: u32, poly: usize) -> FiniteHyperfield {
    let q = 1usize << k;
    let data = HyperringData {
        labels: (0..q).map(|a| a.to_string()).collect(),
        add: HyperOpTable::from_fn(q, |a, b| SubsetMask::singleton(a ^ b)).unwrap(),
        zero: 0,
        mul: (0..q * q).map(|i| gf_mul(i / q, i % q, k, poly)).collect(),
        one: 1,
    };
    verify_hyperfield(data).unwrap()
}

fn krasner_below() -> OrderedCanonicalHypergroup {
    let table = HyperOpTable::new(2, vec![[0].into_iter().collect(), [1].into_iter().collect(), [1].into_iter().collect(), [0, 1].into_iter().collect()]).unwrap();
    let h = verify_canonical(table, 0, vec!["e".into(), "x".into()]).unwrap();
    OrderedCanonicalHypergroup::new(h, OrderRelation::chain(2, &[1, 0]).unwrap()).unwrap()
}

#[test]
fn library_agrees_with_oracle() {
    let h = krasner_below();
    assert!(check_fvk_properties(&h).unwrap().all_passed());
    for (k, poly) in FIELDS {
        let f = gf_hyperfield(k, poly);
        let values = (0..f.size())
            .map(|a| match a {
                0 => Value::Infinity,
                1 => Value::Finite(0),
                _ => Value::Finite(1),
            })
            .collect();
        let w = FiniteHypervaluation::new(f, h.clone(), values).unwrap();
        assert!(check_hypervaluation(&w).unwrap().all_passed(), "GF(2^{k})");
        assert!(check_valpro(&w).all_passed());
        let props = proposition_checks(&w).unwrap();
        let failed: Vec<&str> = props.failures().map(|d| d.name.as_str()).collect();
        assert_eq!(failed, [O_VALUATION_RING, G_LINEAR], "GF(2^{k})");
        assert!(matches!(decompose(&w), Err(HyperError::Verification(_))));
    }
}

/// Within hyperfields of order <= 4 and ordered hypergroups of order 2..4,
/// the GF(4) map above is the only hypervaluation.
#[test]
fn only_witness_in_small_catalogs() {
    let gf4 = gf_hyperfield(2, 0b111);
    let target = krasner_below();
    let mut found = Vec::new();
    for n in 2..=4 {
        for f in enumerate_hyperfields(n, Budget::UNLIMITED).unwrap().entries {
            for m in 2..=4 {
                for h in enumerate_ordered_hypergroups(m, Budget::UNLIMITED).unwrap().entries {
                    for w in enumerate_hypervaluations(&f, &h).unwrap().entries {
                        found.push((f.clone(), h.clone(), w));
                    }
                }
            }
        }
    }
    assert_eq!(found.len(), 1);
    let (f, h, w) = &found[0];
    assert_eq!(f.size(), 4);
    assert!(find_isomorphism(f.additive(), gf4.additive(), None).is_some());
    assert!(f.nonzero().all(|a| f.add(a, a) == SubsetMask::singleton(f.zero())));
    let iso = find_isomorphism(h.hypergroup(), target.hypergroup(), Some((h.order(), target.order())));
    assert!(iso.is_some());
    let x = 1 - h.identity();
    for a in f.nonzero() {
        let expected = if a == f.one() { h.identity() } else { x };
        assert_eq!(w.value(a), Value::Finite(expected));
    }
}
