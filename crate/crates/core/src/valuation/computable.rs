//! Hypervaluations on a computable field, checked on deterministic samples.
//!
//! Sample `i` is drawn from a ChaCha stream derived from `(seed, i)`, so a
//! report depends only on the seed and the sample count, not on how the
//! work is split across threads. Each check keeps the counterexample with the
//! smallest sample index.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{value_leq, value_min, Value, V1, V2, V3, V4, VALPRO_INV, VALPRO_ONE};
use crate::diagnostic::{Diagnostic, DiagnosticBundle, Witness};
use crate::error::{HyperError, Result};
use crate::hypergroup::{SIGN_NEG, SIGN_POS, SIGN_ZERO};
use crate::order::{ordered_sign_hypergroup, OrderedCanonicalHypergroup};
use crate::rational::{format_rational, is_prime, padic_valuation, pow, Rational};

pub trait ComputableField: Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` at zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn sample_nonzero(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    fn show(&self, a: &Self::Elem) -> String;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// The rationals, sampled as `±p^k u/v` so that all valuations in
/// `[-max_exp - ..., max_exp + ...]` are exercised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalField {
    pub prime: u64,
    pub max_exp: i64,
    pub max_unit: i64,
}

impl RationalField {
    pub fn new(prime: u64) -> Self {
        RationalField { prime, max_exp: 6, max_unit: 1000 }
    }
}

impl ComputableField for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }

    fn one(&self) -> Rational {
        Rational::one()
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }

    fn neg(&self, a: &Rational) -> Rational {
        -a
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn inv(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn sample_nonzero(&self, rng: &mut ChaCha8Rng) -> Rational {
        let k = rng.gen_range(-self.max_exp..=self.max_exp);
        let u = rng.gen_range(1..=self.max_unit);
        let v = rng.gen_range(1..=self.max_unit);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        pow(self.prime, k) * Rational::new(BigInt::from(sign * u), BigInt::from(v))
    }

    fn show(&self, a: &Rational) -> String {
        format_rational(a)
    }
}

type ValueFn<E> = Arc<dyn Fn(&E) -> Value + Send + Sync>;
type BackingFn<E> = Arc<dyn Fn(&E) -> Option<i64> + Send + Sync>;
type RepFn<E> = Arc<dyn Fn(i64) -> E + Send + Sync>;

/// `w = value`, backed by a classical valuation `v` into the integers.
/// `representative(k)` names the coset of `U_w` at `v`-value `k`; the
/// coset of `x` is represented by `representative(v(x))` unless a
/// canonicalizer is supplied.
#[derive(Clone)]
pub struct ComputableHypervaluation<F: ComputableField> {
    pub name: String,
    field: F,
    codomain: OrderedCanonicalHypergroup,
    value: ValueFn<F::Elem>,
    backing: BackingFn<F::Elem>,
    representative: RepFn<F::Elem>,
    canonicalizer: Option<Arc<dyn Fn(&F::Elem) -> F::Elem + Send + Sync>>,
}

impl<F: ComputableField> fmt::Debug for ComputableHypervaluation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComputableHypervaluation").field("name", &self.name).finish_non_exhaustive()
    }
}

impl<F: ComputableField> ComputableHypervaluation<F> {
    pub fn new(
        name: impl Into<String>,
        field: F,
        codomain: OrderedCanonicalHypergroup,
        value: impl Fn(&F::Elem) -> Value + Send + Sync + 'static,
        backing: impl Fn(&F::Elem) -> Option<i64> + Send + Sync + 'static,
        representative: impl Fn(i64) -> F::Elem + Send + Sync + 'static,
    ) -> Self {
        ComputableHypervaluation {
            name: name.into(),
            field,
            codomain,
            value: Arc::new(value),
            backing: Arc::new(backing),
            representative: Arc::new(representative),
            canonicalizer: None,
        }
    }

    /// Replaces the value oracle, keeping everything else.
    pub fn with_value(mut self, name: impl Into<String>, value: impl Fn(&F::Elem) -> Value + Send + Sync + 'static) -> Self {
        self.name = name.into();
        self.value = Arc::new(value);
        self
    }

    pub fn with_canonicalizer(mut self, c: impl Fn(&F::Elem) -> F::Elem + Send + Sync + 'static) -> Self {
        self.canonicalizer = Some(Arc::new(c));
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn codomain(&self) -> &OrderedCanonicalHypergroup {
        &self.codomain
    }

    pub fn value(&self, x: &F::Elem) -> Value {
        (self.value)(x)
    }

    pub fn backing(&self, x: &F::Elem) -> Option<i64> {
        (self.backing)(x)
    }

    pub fn representative(&self, k: i64) -> F::Elem {
        (self.representative)(k)
    }

    /// Representative of `x U_w`; `None` at zero.
    pub fn canonical(&self, x: &F::Elem) -> Option<F::Elem> {
        match &self.canonicalizer {
            Some(c) => (!self.field.is_zero(x)).then(|| c(x)),
            None => self.backing(x).map(|k| self.representative(k)),
        }
    }

    /// `h(k) = w(representative(k))`, the map from the value group to `H`.
    pub fn h(&self, k: i64) -> Value {
        self.value(&self.representative(k))
    }

    fn show_value(&self, v: Value) -> String {
        v.show(self.codomain.hypergroup())
    }
}

/// The sign hypervaluation through the `p`-adic valuation on the rationals:
/// `w(x) = 1` if `v_p(x) > 0`, `0` if `v_p(x) = 0`, `-1` if `v_p(x) < 0`.
pub fn sign_hypervaluation_padic(p: u64) -> Result<ComputableHypervaluation<RationalField>> {
    if !is_prime(p) {
        return Err(HyperError::NotPrime(p));
    }
    Ok(ComputableHypervaluation::new(
        format!("{p}-adic sign hypervaluation"),
        RationalField::new(p),
        ordered_sign_hypergroup(),
        move |x: &Rational| match padic_valuation(x, p) {
            None => Value::Infinity,
            Some(k) if k > 0 => Value::Finite(SIGN_POS),
            Some(0) => Value::Finite(SIGN_ZERO),
            Some(_) => Value::Finite(SIGN_NEG),
        },
        move |x: &Rational| padic_valuation(x, p),
        move |k| pow(p, k),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleFailure {
    pub index: usize,
    pub values: Vec<String>,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledCheck {
    pub name: String,
    pub evaluated: usize,
    pub violations: usize,
    pub first: Option<SampleFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleReport {
    pub name: String,
    pub seed: u64,
    pub n_samples: usize,
    /// Set when nothing was sampled; the pass is then vacuous.
    pub no_evidence: bool,
    pub checks: Vec<SampledCheck>,
}

impl SampleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0)
    }

    pub fn total_violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn get(&self, name: &str) -> Option<&SampledCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_bundle(&self) -> DiagnosticBundle {
        self.checks
            .iter()
            .map(|c| {
                let details = format!("{} samples, seed {}, {} violations", c.evaluated, self.seed, c.violations);
                match &c.first {
                    None if self.no_evidence => Diagnostic::pass(&c.name).with_details("no evidence: 0 samples"),
                    None => Diagnostic::pass(&c.name).with_details(details),
                    Some(f) => Diagnostic::fail(
                        &c.name,
                        Witness::values(f.values.clone()),
                        format!("{details}; first at sample {}: {}", f.index, f.details),
                    ),
                }
            })
            .collect()
    }
}

type Outcome = Option<(Vec<String>, String)>;

fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs `probe` on samples `0..n`; `probe` returns one outcome per name.
fn run_samples(
    name: &str,
    names: &[&str],
    n: usize,
    seed: u64,
    probe: impl Fn(&mut ChaCha8Rng) -> Vec<Outcome> + Sync,
) -> SampleReport {
    let outcomes: Vec<Vec<Outcome>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let out = probe(&mut sample_rng(seed, i));
            debug_assert_eq!(out.len(), names.len());
            out
        })
        .collect();
    let mut checks: Vec<SampledCheck> = names
        .iter()
        .map(|&name| SampledCheck { name: name.to_string(), evaluated: n, violations: 0, first: None })
        .collect();
    for (index, row) in outcomes.into_iter().enumerate() {
        for (check, outcome) in checks.iter_mut().zip(row) {
            if let Some((values, details)) = outcome {
                check.violations += 1;
                if check.first.is_none() {
                    check.first = Some(SampleFailure { index, values, details });
                }
            }
        }
    }
    SampleReport { name: name.to_string(), seed, n_samples: n, no_evidence: n == 0, checks }
}

fn fail_if(bad: bool, values: impl FnOnce() -> Vec<String>, details: impl FnOnce() -> String) -> Outcome {
    bad.then(|| (values(), details()))
}

pub const BACKING_MUL: &str = "v(xy) = v(x) + v(y)";
pub const BACKING_ADD: &str = "v(x+y) >= min(v(x), v(y))";

fn at_least(a: Option<i64>, m: i64) -> bool {
    a.map_or(true, |a| a >= m)
}

/// V1-V4 (V4 in the field form `w(x+y) >= min(w(x), w(y))`), the two
/// identities `w(1) = e`, `w(x^-1) = w(x)^-1`, and the backing valuation's
/// own axioms, on `n` sampled pairs.
pub fn sampled_check<F: ComputableField>(cw: &ComputableHypervaluation<F>, n: usize, seed: u64) -> SampleReport {
    let names = [V1, V2, V3, V4, VALPRO_ONE, VALPRO_INV, BACKING_MUL, BACKING_ADD];
    let fld = &cw.field;
    let order = cw.codomain.order();
    let h = cw.codomain.hypergroup();
    let e = cw.codomain.identity();
    run_samples(&cw.name, &names, n, seed, |rng| {
        let x = fld.sample_nonzero(rng);
        let y = fld.sample_nonzero(rng);
        let (wx, wy) = (cw.value(&x), cw.value(&y));
        let show = |a: &F::Elem| fld.show(a);
        let pair = || vec![show(&x), show(&y)];
        let v1 = fail_if(
            cw.value(&fld.zero()) != Value::Infinity || wx == Value::Infinity,
            || vec![show(&x)],
            || format!("w(0) = {}, w(x) = {}", cw.show_value(cw.value(&fld.zero())), cw.show_value(wx)),
        );
        let v2 = fail_if(cw.value(&fld.neg(&x)) != wx, || vec![show(&x)], || "w(-x) != w(x)".into());
        let xy = fld.mul(&x, &y);
        let wxy = cw.value(&xy);
        let v3 = fail_if(
            match (wx, wy, wxy) {
                (Value::Finite(a), Value::Finite(b), Value::Finite(c)) => !h.op(a, b).contains(c),
                _ => true,
            },
            pair,
            || format!("w(xy) = {} vs w(x) = {}, w(y) = {}", cw.show_value(wxy), cw.show_value(wx), cw.show_value(wy)),
        );
        let s = fld.add(&x, &y);
        let ws = cw.value(&s);
        let m = value_min(order, wx, wy);
        let v4 = fail_if(!value_leq(order, m, ws), pair, || {
            format!("w(x+y) = {} < min = {}", cw.show_value(ws), cw.show_value(m))
        });
        let one = fail_if(cw.value(&fld.one()) != Value::Finite(e), Vec::new, || {
            format!("w(1) = {}", cw.show_value(cw.value(&fld.one())))
        });
        let wxi = cw.value(&fld.inv(&x).expect("sampled nonzero"));
        let inv = fail_if(
            match (wx, wxi) {
                (Value::Finite(a), Value::Finite(b)) => h.inverse(a) != b,
                _ => true,
            },
            || vec![show(&x)],
            || format!("w(x) = {}, w(x^-1) = {}", cw.show_value(wx), cw.show_value(wxi)),
        );
        let (vx, vy) = (cw.backing(&x), cw.backing(&y));
        let bm = fail_if(
            match (vx, vy) {
                (Some(a), Some(b)) => cw.backing(&xy) != Some(a + b),
                _ => true,
            },
            pair,
            || "v not multiplicative".into(),
        );
        let ba = fail_if(
            match (vx, vy) {
                (Some(a), Some(b)) => !at_least(cw.backing(&s), a.min(b)),
                _ => true,
            },
            pair,
            || "v(x+y) below min".into(),
        );
        vec![v1, v2, v3, v4, one, inv, bm, ba]
    })
}

pub const H_COMPOSITE: &str = "w = h ∘ v";
pub const SAME_RING: &str = "x ∈ O_v iff x ∈ O_w";
pub const H_ORDER: &str = "h order preserving";
pub const H_HOMOMORPHISM: &str = "h(k1 + k2) ∈ h(k1)*h(k2)";
pub const COSET_REP: &str = "x / rep(x) ∈ U_w";

/// The value group `F*/U_w` presented through the backing valuation:
/// the coset at `k` is represented by `representative(k)`, ordered as `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputableDecomposition {
    pub name: String,
    pub presentation: String,
    /// Smallest and largest `v`-values seen.
    pub sampled_range: (i64, i64),
    /// `(k, h(k))` for every `k` in the sampled range.
    pub h_table: Vec<(i64, String)>,
    pub axioms: SampleReport,
    pub identities: SampleReport,
}

impl ComputableDecomposition {
    pub fn all_passed(&self) -> bool {
        self.axioms.all_passed() && self.identities.all_passed()
    }

    pub fn to_bundle(&self) -> DiagnosticBundle {
        let mut b = self.axioms.to_bundle();
        b.extend(self.identities.to_bundle());
        b
    }
}

/// `w = h ∘ v` with `v` the backing valuation, checked on samples: the
/// composite, `O_v = O_w`, monotonicity and the homomorphism property of
/// `h` on pairs of sampled values, and coset representatives.
pub fn decompose_computable<F: ComputableField>(
    cw: &ComputableHypervaluation<F>,
    n: usize,
    seed: u64,
) -> ComputableDecomposition {
    let axioms = sampled_check(cw, n, seed);
    let fld = &cw.field;
    let order = cw.codomain.order();
    let h = cw.codomain.hypergroup();
    let e = cw.codomain.identity();
    let names = [H_COMPOSITE, SAME_RING, H_ORDER, H_HOMOMORPHISM, COSET_REP];
    let identities = run_samples(&cw.name, &names, n, seed, |rng| {
        let x = fld.sample_nonzero(rng);
        let y = fld.sample_nonzero(rng);
        let show = |a: &F::Elem| fld.show(a);
        let (kx, ky) = (cw.backing(&x).expect("nonzero"), cw.backing(&y).expect("nonzero"));
        let (wx, hx, hy) = (cw.value(&x), cw.h(kx), cw.h(ky));
        let comp = fail_if(wx != hx, || vec![show(&x)], || {
            format!("w(x) = {}, h(v(x)) = {}", cw.show_value(wx), cw.show_value(hx))
        });
        let in_ow = value_leq(order, Value::Finite(e), wx);
        let ring = fail_if((kx >= 0) != in_ow, || vec![show(&x)], || format!("v(x) = {kx}, w(x) = {}", cw.show_value(wx)));
        let (lo, hi, hlo, hhi) = if kx <= ky { (kx, ky, hx, hy) } else { (ky, kx, hy, hx) };
        let mono = fail_if(!value_leq(order, hlo, hhi), || vec![lo.to_string(), hi.to_string()], || {
            format!("h({lo}) = {} > h({hi}) = {}", cw.show_value(hlo), cw.show_value(hhi))
        });
        let hsum = cw.h(kx + ky);
        let hom = fail_if(
            match (hx, hy, hsum) {
                (Value::Finite(a), Value::Finite(b), Value::Finite(c)) => !h.op(a, b).contains(c),
                _ => true,
            },
            || vec![kx.to_string(), ky.to_string()],
            || format!("h({}) = {}", kx + ky, cw.show_value(hsum)),
        );
        let rep = cw.canonical(&x).expect("nonzero");
        let quotient = fld.mul(&x, &fld.inv(&rep).expect("representative nonzero"));
        let coset = fail_if(
            cw.backing(&rep) != Some(kx) || cw.value(&quotient) != Value::Finite(e),
            || vec![show(&x), show(&rep)],
            || "representative outside the coset".into(),
        );
        vec![comp, ring, mono, hom, coset]
    });
    let (mut lo, mut hi) = (0i64, 0i64);
    for i in 0..n {
        let mut rng = sample_rng(seed, i);
        for _ in 0..2 {
            let k = cw.backing(&fld.sample_nonzero(&mut rng)).expect("nonzero");
            lo = lo.min(k);
            hi = hi.max(k);
        }
    }
    let h_table = (lo..=hi).map(|k| (k, cw.show_value(cw.h(k)))).collect();
    ComputableDecomposition {
        name: cw.name.clone(),
        presentation: "coset at k represented by p^k; order embedding k -> k into the integers".into(),
        sampled_range: (lo, hi),
        h_table,
        axioms,
        identities,
    }
}

/// Membership of one element in `O_v` and `O_w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipPoint {
    pub x: String,
    pub v: i64,
    pub w: String,
    pub in_o_v: bool,
    pub in_o_w: bool,
}

/// Equal valuation rings without an order-preserving isomorphism between
/// the value structures: the classical `p`-adic valuation onto the integers
/// and the sign hypervaluation onto a three-element hypergroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OEqualReport {
    pub p: u64,
    pub seed: u64,
    pub samples: usize,
    pub agreements: usize,
    /// `(p^k, v(p^k))` for `k = 0..=3`.
    pub cardinality_witness: Vec<(String, i64)>,
    pub distinct_values: usize,
    pub codomain_size: usize,
    pub no_bijection: bool,
    pub points: Vec<MembershipPoint>,
}

impl OEqualReport {
    pub fn all_passed(&self) -> bool {
        self.agreements == self.samples && self.no_bijection && self.points.iter().all(|m| m.in_o_v == m.in_o_w)
    }

    pub fn to_bundle(&self) -> DiagnosticBundle {
        let mut b = DiagnosticBundle::new();
        b.push(Diagnostic::from_bool(
            SAME_RING,
            self.agreements == self.samples,
            format!("{}/{} samples agree (seed {})", self.agreements, self.samples, self.seed),
        ));
        let ws: Vec<String> = self.cardinality_witness.iter().map(|(x, k)| format!("v({x}) = {k}")).collect();
        b.push(Diagnostic::from_bool(
            "no bijection between value structures",
            self.no_bijection,
            format!("{} distinct values vs |H| = {}: {}", self.distinct_values, self.codomain_size, ws.join(", ")),
        ));
        for m in &self.points {
            b.push(Diagnostic::from_bool(
                format!("membership at x = {}", m.x),
                m.in_o_v == m.in_o_w,
                format!("v = {}, w = {}, in O_v: {}, in O_w: {}", m.v, m.w, m.in_o_v, m.in_o_w),
            ));
        }
        b
    }
}

pub fn o_equal_without_isomorphism_report(p: u64, n: usize, seed: u64) -> Result<OEqualReport> {
    let cw = sign_hypervaluation_padic(p)?;
    let fld = &cw.field;
    let e = cw.codomain.identity();
    let order = cw.codomain.order();
    let membership = |x: &Rational| {
        let v = cw.backing(x).expect("nonzero");
        let w = cw.value(x);
        MembershipPoint {
            x: format_rational(x),
            v,
            w: cw.show_value(w),
            in_o_v: v >= 0,
            in_o_w: value_leq(order, Value::Finite(e), w),
        }
    };
    let agreements = (0..n)
        .into_par_iter()
        .filter(|&i| {
            let m = membership(&fld.sample_nonzero(&mut sample_rng(seed, i)));
            m.in_o_v == m.in_o_w
        })
        .count();
    let cardinality_witness: Vec<(String, i64)> =
        (0..=3).map(|k| pow(p, k)).map(|x| (format_rational(&x), cw.backing(&x).expect("nonzero"))).collect();
    let mut distinct: Vec<i64> = cardinality_witness.iter().map(|(_, k)| *k).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let codomain_size = cw.codomain.size();
    Ok(OEqualReport {
        p,
        seed,
        samples: n,
        agreements,
        distinct_values: distinct.len(),
        codomain_size,
        no_bijection: distinct.len() > codomain_size,
        cardinality_witness,
        points: vec![membership(&pow(p, -1)), membership(&Rational::one())],
    })
}
