//! Executable checks of the closed forms and lemmas, each instantiated
//! exhaustively over its quantifier range for one (n, k).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{binom_i, binom_signed};
use crate::closed_forms::{
    double_sum_part, f_eval, layer_mod_compare, layer_mod_sum, r_eval, r_prime_eval, s_eval,
    s_prime_eval, u_d1, UTable, Via,
};
use crate::error::{Error, Result};
use crate::report::Status;
use crate::weights::assign_weights_generic;

macro_rules! lemmas {
    ($($variant:ident => $name:literal,)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum Lemma {
            $($variant,)*
        }

        impl Lemma {
            pub const ALL: &'static [Lemma] = &[$(Lemma::$variant,)*];

            pub fn name(&self) -> &'static str {
                match self {
                    $(Lemma::$variant => $name,)*
                }
            }
        }
    };
}

lemmas! {
    SClosedForm => "S_closed_form",
    SPrimeClosedForm => "S_prime_closed_form",
    SDiffPositive => "S_diff_positive",
    Step1 => "step1",
    Step2 => "step2",
    Step1Upper => "step1_upper",
    Step2Upper => "step2_upper",
    UOuterEqW => "U_outer_eq_W",
    UA0 => "U_A0",
    InnerWEqUDiff => "inner_W_eq_U_diff",
    InnerWEqUDiffD1 => "inner_W_eq_U_diff_d1",
    OuterRecursionD1 => "outer_recursion_d1",
    UDiffDoubleSum => "U_diff_double_sum",
    UDiffFForm => "U_diff_F_form",
    UDiffEqFDiff => "U_diff_eq_F_diff",
    FBIs0 => "F_b_is_0",
    FCIs0 => "F_c_is_0",
    FSymmetry => "F_symmetry",
    FMonotone => "F_monotone",
    FPascal => "F_pascal",
    LayerMod => "layer_mod",
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .iter()
            .find(|l| l.name().eq_ignore_ascii_case(s.trim()))
            .copied()
            .ok_or_else(|| Error::UnknownLemma(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub lemma: String,
    pub n: u32,
    pub k: u32,
    pub status: Status,
    /// Number of instances compared.
    pub checked: u64,
    pub failures: u64,
    /// First failing instance, if any.
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equality_set: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

struct Scan {
    checked: u64,
    failures: u64,
    first: Option<Value>,
    equality: Option<Vec<Value>>,
    note: Option<String>,
}

impl Scan {
    fn new() -> Self {
        Scan {
            checked: 0,
            failures: 0,
            first: None,
            equality: None,
            note: None,
        }
    }

    fn check(&mut self, ok: bool, ctx: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(ctx());
            }
        }
    }

    fn eq<T: PartialEq + fmt::Display>(&mut self, lhs: T, rhs: T, ctx: impl FnOnce() -> Value) {
        let ok = lhs == rhs;
        self.check(ok, || {
            let mut v = ctx();
            v["lhs"] = json!(lhs.to_string());
            v["rhs"] = json!(rhs.to_string());
            v
        });
    }

    fn record_equality(&mut self, v: Value) {
        self.equality.get_or_insert_with(Vec::new).push(v);
    }

    fn finish(self, lemma: Lemma, n: u32, k: u32) -> PropertyReport {
        PropertyReport {
            lemma: lemma.name().to_string(),
            n,
            k,
            status: Status::from_bool(self.failures == 0),
            checked: self.checked,
            failures: self.failures,
            counterexample: self.first,
            equality_set: self.equality,
            note: self.note,
        }
    }
}

fn q(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

/// Lower types (a, c) with a >= c, in ascending c then a.
fn lower_types(n: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..=n).flat_map(move |c| (c..=n - c).map(move |a| (a, c)))
}

fn all_ac(n: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..=n).flat_map(move |c| (0..=n - c).map(move |a| (a, c)))
}

/// Runs one lemma over its full range for (n, k). Requires 1 <= k <= n.
pub fn check_lemma(lemma: Lemma, n: u32, k: u32) -> Result<PropertyReport> {
    if k < 1 || k > n {
        return Err(Error::OutOfRange(format!(
            "need 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    let (ni, ki) = (i64::from(n), i64::from(k));
    let mut s = Scan::new();
    let table = || assign_weights_generic(n, 2, k);
    match lemma {
        Lemma::SClosedForm | Lemma::SPrimeClosedForm => {
            let f = if lemma == Lemma::SClosedForm {
                s_eval
            } else {
                s_prime_eval
            };
            for d in 0..=n + 1 {
                for (a, c) in all_ac(ni) {
                    s.eq(
                        f(n, d, a, c, Via::Sum),
                        f(n, d, a, c, Via::Closed),
                        || json!({"d": d, "a": a, "c": c}),
                    );
                }
            }
        }
        Lemma::SDiffPositive => {
            for d in 0..=n {
                let di = i64::from(d);
                for (a, c) in all_ac(ni) {
                    if a < c + di {
                        continue;
                    }
                    let lhs = s_eval(n, d, a, c, Via::Closed);
                    let rhs = s_eval(n, d, a + 1, c - 1, Via::Closed);
                    if lhs == rhs {
                        s.record_equality(json!({"d": d, "a": a, "c": c}));
                    }
                    s.check(lhs > rhs, || {
                        json!({"d": d, "a": a, "c": c, "lhs": lhs.to_string(), "rhs": rhs.to_string()})
                    });
                }
            }
        }
        Lemma::Step1 => {
            let w = table()?;
            for (a, c) in lower_types(ni).filter(|(a, c)| a - c >= ki) {
                let rhs =
                    q(s_eval(n, 0, a, c, Via::Closed) - s_eval(n, 0, a + 1, c - 1, Via::Closed))
                        + r_eval(&w, 0, a + 1 + ki, c - 1 - ki)
                        + r_eval(&w, 0, a + 1 + ki, c - ki);
                s.eq(w.w(a, c), rhs, || json!({"a": a, "c": c}));
            }
        }
        Lemma::Step2 => {
            let w = table()?;
            for (a, c) in lower_types(ni).filter(|(a, c)| a - c >= ki) {
                for d in 0..=n {
                    let rhs = q(s_eval(n, d + 1, a, c, Via::Closed)
                        - s_eval(n, d + 1, a + 1, c - 1, Via::Closed))
                        + r_eval(&w, d + 1, a + 1 + ki, c - 1 - ki)
                        + r_eval(&w, d + 1, a + 1 + ki, c - ki);
                    s.eq(r_eval(&w, d, a, c), rhs, || json!({"d": d, "a": a, "c": c}));
                }
            }
        }
        Lemma::Step1Upper => {
            let w = table()?;
            for (a, c) in all_ac(ni).filter(|(a, c)| c - a >= ki) {
                let rhs = q(s_prime_eval(n, 0, a, c, Via::Closed)
                    - s_prime_eval(n, 0, a - 1, c + 1, Via::Closed))
                    + r_prime_eval(&w, 0, a - 1 - ki, c + 1 + ki)
                    + r_prime_eval(&w, 0, a - ki, c + 1 + ki);
                s.eq(w.w(a, c), rhs, || json!({"a": a, "c": c}));
            }
        }
        Lemma::Step2Upper => {
            let w = table()?;
            for (a, c) in all_ac(ni).filter(|(a, c)| c - a >= ki) {
                for d in 0..=n {
                    let rhs = q(s_prime_eval(n, d + 1, a, c, Via::Closed)
                        - s_prime_eval(n, d + 1, a - 1, c + 1, Via::Closed))
                        + r_prime_eval(&w, d + 1, a - 1 - ki, c + 1 + ki)
                        + r_prime_eval(&w, d + 1, a - ki, c + 1 + ki);
                    s.eq(
                        r_prime_eval(&w, d, a, c),
                        rhs,
                        || json!({"d": d, "a": a, "c": c}),
                    );
                }
            }
        }
        Lemma::UOuterEqW => {
            let w = table()?;
            let u = UTable::new(n, k);
            for (a, c) in all_ac(ni).filter(|(a, c)| (a - c).abs() >= ki) {
                s.eq(w.w(a, c), q(u.get(a, c)), || json!({"a": a, "c": c}));
            }
        }
        Lemma::UA0 => {
            let u = UTable::new(n, k);
            for a in 0..=ni {
                s.eq(u.get(a, 0), binom_signed(ni - 1, a - 1), || json!({"A": a}));
            }
        }
        Lemma::InnerWEqUDiff => {
            let w = table()?;
            let u = UTable::new(n, k);
            for (a, c) in all_ac(ni).filter(|(a, c)| (a - c).abs() < ki) {
                let rhs = if a >= c {
                    u.get(a, c) - u.get(a - ki, c + ki)
                } else {
                    u.get(a, c) - u.get(a + ki, c - ki)
                };
                s.eq(w.w(a, c), q(rhs), || json!({"a": a, "c": c}));
            }
        }
        Lemma::InnerWEqUDiffD1 => {
            let w = assign_weights_generic(n, 1, k)?;
            for m in (0..=ni).filter(|m| 2 * m <= ni && 2 * m + ki > ni) {
                let rhs = u_d1(n, k, m) - u_d1(n, k, m + ki);
                s.eq(w.w_layer(m), q(rhs), || json!({"m": m}));
            }
        }
        Lemma::OuterRecursionD1 => {
            let w = assign_weights_generic(n, 1, k)?;
            for m in (0..=ni).filter(|m| 2 * m + ki <= ni) {
                let rhs = q(binom_i(ni, m) - binom_i(ni, m - 1)) + w.w_layer(m - ki - 1);
                s.eq(w.w_layer(m), rhs, || json!({"m": m}));
            }
        }
        Lemma::UDiffDoubleSum | Lemma::UDiffEqFDiff => {
            let u = UTable::new(n, k);
            for (a, c) in lower_types(ni).filter(|(a, c)| a - c < ki) {
                let b = ni - a - c;
                let lhs = u.get(a, c) - u.get(a - ki, c + ki);
                let rhs = if lemma == Lemma::UDiffDoubleSum {
                    double_sum_part(n, k, b, c) - double_sum_part(n, k, b, c - 1)
                } else {
                    f_eval(n, k, b, c) - f_eval(n, k, b, c - 1)
                };
                s.eq(lhs, rhs, || json!({"A": a, "B": b, "C": c}));
            }
        }
        Lemma::UDiffFForm => {
            for (a, c) in all_ac(ni) {
                let b = ni - a - c;
                s.eq(
                    double_sum_part(n, k, b, c),
                    f_eval(n, k, b, c),
                    || json!({"B": b, "C": c}),
                );
            }
        }
        Lemma::FBIs0 => {
            for c in (0..=ni).filter(|c| ni - ki < 2 * c && 2 * c <= ni) {
                let f0 = f_eval(n, k, 0, c);
                s.eq(
                    f0.clone(),
                    layer_mod_sum(n, k, c),
                    || json!({"C": c, "part": "closed"}),
                );
                let prev = f_eval(n, k, 0, c - 1);
                s.check(f0 > prev, || {
                    json!({"C": c, "part": "strict", "lhs": f0.to_string(), "rhs": prev.to_string()})
                });
            }
        }
        Lemma::FCIs0 => {
            for b in (0..=ni).filter(|b| ni - ki < *b) {
                let f = f_eval(n, k, b, 0);
                if f.is_zero() {
                    s.record_equality(json!({"B": b}));
                }
                s.check(
                    !f.is_negative() && (f.is_zero() == (b == ni)),
                    || json!({"B": b, "value": f.to_string()}),
                );
            }
        }
        Lemma::FSymmetry => {
            for (a, c) in all_ac(ni) {
                let b = ni - a - c;
                s.eq(
                    f_eval(n, k, b, c),
                    f_eval(n, k, b, a),
                    || json!({"A": a, "B": b, "C": c}),
                );
            }
        }
        Lemma::FMonotone => {
            for (a, c) in lower_types(ni).filter(|(a, c)| a - c < ki) {
                let b = ni - a - c;
                let lhs = f_eval(n, k, b, c);
                let rhs = f_eval(n, k, b, c - 1);
                if lhs == rhs {
                    s.record_equality(json!({"B": b, "C": c}));
                }
                let ok = lhs >= rhs && ((lhs == rhs) == (b == ni && c == 0));
                s.check(ok, || {
                    json!({"A": a, "B": b, "C": c, "lhs": lhs.to_string(), "rhs": rhs.to_string()})
                });
            }
        }
        Lemma::FPascal => {
            s.note = Some(
                "checked for C >= 1; at C = 0 the F = 0 convention for C < 0 breaks the identity"
                    .into(),
            );
            for (a, c) in all_ac(ni).filter(|(_, c)| *c >= 1) {
                let b = ni - a - c;
                let rhs = f_eval(n - 1, k, b, c)
                    + f_eval(n - 1, k, b - 1, c)
                    + f_eval(n - 1, k, b, c - 1);
                s.eq(f_eval(n, k, b, c), rhs, || json!({"B": b, "C": c}));
            }
        }
        Lemma::LayerMod => {
            if k < 2 {
                s.note = Some("k = 1 lies outside the stated range k >= 2".into());
            }
            for m in 0..=ki {
                for m2 in 0..=ki {
                    let (actual, predicted) = layer_mod_compare(n, k, m, m2);
                    s.check(actual == predicted, || {
                        json!({"m": m, "m_prime": m2, "actual": format!("{actual:?}"), "predicted": format!("{predicted:?}")})
                    });
                }
            }
        }
    }
    Ok(s.finish(lemma, n, k))
}

/// Every lemma for one (n, k).
pub fn check_all(n: u32, k: u32) -> Result<Vec<PropertyReport>> {
    Lemma::ALL.iter().map(|&l| check_lemma(l, n, k)).collect()
}
