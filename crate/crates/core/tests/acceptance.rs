//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use chainforge::arith::{binom, to_fixed};
use chainforge::asymptotics::density_row;
use chainforge::chain::Family;
use chainforge::grid::{candidate_size, Variant};
use chainforge::lemmas::{check_lemma, Lemma};
use chainforge::oracle::{certify_theorem, Claim, OracleBudget};
use chainforge::weights::{
    assign_weights_fast_d1, assign_weights_fast_d2, assign_weights_generic,
    assign_weights_generic_with, expected_zero_owners, positivity_report, sperner_table,
    verify_induced, verify_induced_with, GenericOptions, InducedMode, PointBudget, TieOrder,
};

/// Collects failure descriptions for one criterion.
#[derive(Default)]
struct Check {
    checked: u64,
    failures: Vec<String>,
}

impl Check {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn summary(&self) -> String {
        if self.failures.is_empty() {
            return format!("{} checks", self.checked);
        }
        let limit = if std::env::var_os("ACCEPTANCE_VERBOSE").is_some() {
            usize::MAX
        } else {
            6
        };
        let shown: Vec<&str> = self
            .failures
            .iter()
            .take(limit)
            .map(String::as_str)
            .collect();
        let more = self.failures.len().saturating_sub(shown.len());
        let tail = if more > 0 {
            format!(" (+{more} more)")
        } else {
            String::new()
        };
        format!(
            "{} of {} checks failed: {}{}",
            self.failures.len(),
            self.checked,
            shown.join("; "),
            tail
        )
    }
}

fn count(v: Option<usize>) -> String {
    v.map_or_else(|| "unknown".into(), |x| x.to_string())
}

fn induced_identity() -> Check {
    let mut c = Check::default();
    for n in 1..=12 {
        for k in 1..=n {
            let t = assign_weights_generic(n, 2, k).unwrap();
            let r = verify_induced(&t, InducedMode::Type).unwrap();
            c.expect(r.passed(), || format!("type level n={n} k={k}"));
            if n <= 7 {
                let r = verify_induced(&t, InducedMode::Point).unwrap();
                c.expect(r.passed() && r.checked == 3usize.pow(n), || {
                    format!("point level n={n} k={k}")
                });
            }
        }
    }
    c
}

fn positivity() -> Check {
    let mut c = Check::default();
    for d in [1, 2] {
        for n in 1..=12 {
            for k in 1..=n {
                let t = assign_weights_generic(n, d, k).unwrap();
                let bad = positivity_report(&t);
                let negative = bad.iter().any(|(_, w)| w.is_negative());
                let zeros: Vec<_> = bad.iter().map(|(o, _)| *o).collect();
                c.expect(!negative && zeros == expected_zero_owners(n, d), || {
                    let list: Vec<String> = zeros.iter().map(|o| o.to_string()).collect();
                    format!("d={d} n={n} k={k} non-positive {{{}}}", list.join(","))
                });
            }
        }
    }
    c
}

fn theorem_d2() -> Check {
    let mut c = Check::default();
    let budget = OracleBudget::default();
    for n in 1..=4 {
        for k in 1..=n {
            let v = certify_theorem(n, 2, k, Claim::Theorem, &budget).unwrap();
            let size = candidate_size(n, 2, k, Variant::Theorem).unwrap();
            c.expect(
                v.certified && v.mis.map(BigInt::from) == Some(size.clone()),
                || format!("n={n} k={k} oracle {} vs candidate {size}", count(v.mis)),
            );
            if n <= 3 {
                c.expect(v.unique == Some(true), || {
                    format!(
                        "n={n} k={k} not unique ({} maximum sets)",
                        count(v.maximum_sets)
                    )
                });
            }
        }
    }
    c
}

fn results_d1() -> Check {
    let mut c = Check::default();
    let budget = OracleBudget::default();
    for n in 1..=5 {
        for k in 1..=n {
            let v = certify_theorem(n, 1, k, Claim::Theorem, &budget).unwrap();
            let size = candidate_size(n, 1, k, Variant::Theorem).unwrap();
            c.expect(
                v.certified && v.mis.map(BigInt::from) == Some(size.clone()),
                || format!("n={n} k={k} oracle {} vs candidate {size}", count(v.mis)),
            );
            if n <= 4 {
                let want = if n % 2 == 0 { 1 } else { 2 };
                c.expect(
                    v.maximum_sets == Some(want) && v.unique == Some(true),
                    || {
                        format!(
                            "n={n} k={k} has {} maximum sets, want {want}",
                            count(v.maximum_sets)
                        )
                    },
                );
            }
        }
    }
    c
}

fn run_lemma(c: &mut Check, lemma: Lemma, n: u32, k: u32) -> chainforge::lemmas::PropertyReport {
    let r = check_lemma(lemma, n, k).unwrap();
    c.expect(r.passed(), || {
        format!(
            "{lemma} n={n} k={k} ({} of {} failed)",
            r.failures, r.checked
        )
    });
    r
}

fn closed_forms() -> Check {
    let mut c = Check::default();
    let c = &mut c;
    let run = run_lemma;
    for n in 1..=30 {
        run(c, Lemma::SClosedForm, n, 1);
        run(c, Lemma::SPrimeClosedForm, n, 1);
    }
    for n in 1..=12 {
        for k in 1..=n {
            for l in [
                Lemma::Step1,
                Lemma::Step2,
                Lemma::Step1Upper,
                Lemma::Step2Upper,
                Lemma::InnerWEqUDiff,
                Lemma::InnerWEqUDiffD1,
            ] {
                run(c, l, n, k);
            }
        }
    }
    for n in 1..=20 {
        for k in 1..=n {
            run(c, Lemma::UDiffEqFDiff, n, k);
            if k >= 2 {
                run(c, Lemma::LayerMod, n, k);
            }
        }
    }
    for n in 1..=25 {
        for k in 1..=n {
            run(c, Lemma::FSymmetry, n, k);
            let r = run(c, Lemma::FMonotone, n, k);
            if r.passed() {
                let eq = r.equality_set.clone().unwrap_or_default();
                let want = serde_json::json!([{ "B": n, "C": 0 }]);
                c.expect(serde_json::Value::Array(eq) == want, || {
                    format!("F_monotone n={n} k={k} equality set differs")
                });
            }
        }
    }
    std::mem::take(c)
}

fn path_equivalence() -> Check {
    let mut c = Check::default();
    for n in 1..=20 {
        for k in 1..=n {
            let g = assign_weights_generic(n, 1, k).unwrap();
            let f = assign_weights_fast_d1(n, k).unwrap();
            c.expect(g.entries() == f.entries(), || format!("d=1 n={n} k={k}"));
        }
    }
    for n in 1..=12 {
        for k in 1..=n {
            let g = assign_weights_generic(n, 2, k).unwrap();
            let f = assign_weights_fast_d2(n, k).unwrap();
            c.expect(g.entries() == f.entries(), || format!("d=2 n={n} k={k}"));
            for seed in 0..3 {
                let opts = GenericOptions {
                    family: Family::Basic,
                    tie_order: TieOrder::Shuffled(seed),
                };
                let s = assign_weights_generic_with(n, 2, k, opts).unwrap();
                c.expect(s.entries() == g.entries(), || {
                    format!("d=2 n={n} k={k} seed={seed}")
                });
            }
        }
    }
    c
}

fn sperner() -> Check {
    let mut c = Check::default();
    let budget = PointBudget {
        max_points: 1 << 15,
        max_chains: 50_000_000,
    };
    for n in 1..=15u32 {
        let t = sperner_table(n).unwrap();
        c.expect(positivity_report(&t).is_empty(), || {
            format!("n={n} not strictly positive")
        });
        c.expect(
            verify_induced(&t, InducedMode::Type).unwrap().passed(),
            || format!("n={n} type level"),
        );
        if n <= 8 {
            let r = verify_induced_with(&t, InducedMode::Point, budget).unwrap();
            c.expect(r.passed(), || format!("n={n} point level"));
        }
        let middle = BigRational::from_integer(binom(u64::from(n), u64::from(n / 2)));
        c.expect(t.total_weight() == middle, || format!("n={n} total weight"));
    }
    for n in 1..=4 {
        let v = certify_theorem(n, 1, n, Claim::Theorem, &OracleBudget::default()).unwrap();
        let want = if n % 2 == 0 { 1 } else { 2 };
        let middle = binom(u64::from(n), u64::from(n / 2));
        c.expect(v.mis.map(BigInt::from) == Some(middle), || {
            format!("n={n} oracle size")
        });
        c.expect(
            v.maximum_sets == Some(want) && v.unique == Some(true),
            || format!("n={n} {} maximum sets, want {want}", count(v.maximum_sets)),
        );
    }
    c
}

fn k1_closed_form() -> Check {
    let mut c = Check::default();
    for n in 1..=14u32 {
        let size = candidate_size(n, 2, 1, Variant::Theorem).unwrap();
        c.expect(size == BigInt::from(3).pow(n - 1), || {
            format!("n={n} size {size}")
        });
    }
    c
}

fn density() -> Check {
    let mut c = Check::default();
    let eps = BigRational::new(BigInt::one(), BigInt::from(10).pow(10));
    for k in 1..=3 {
        let r = density_row(100, 2, k).unwrap();
        c.expect(r.deviation < eps, || {
            format!("k={k} deviation {}", r.deviation_sci)
        });
        let fixed = to_fixed(&r.deviation, 30);
        c.expect(fixed.starts_with("0.0000000000"), || {
            format!("k={k} 30-digit value {fixed}")
        });
    }
    c
}

fn anti_basic() -> Check {
    let mut c = Check::default();
    let mut witness = None;
    'outer: for n in 1..=10 {
        for k in 1..=n {
            let opts = GenericOptions {
                family: Family::AntiBasic,
                tie_order: TieOrder::Canonical,
            };
            let t = assign_weights_generic_with(n, 2, k, opts).unwrap();
            if let Some((o, w)) = t.entries().iter().find(|(_, w)| **w < BigRational::zero()) {
                witness = Some(format!("n={n} k={k} W{o}={w}"));
                break 'outer;
            }
        }
    }
    c.expect(witness.is_some(), || {
        "no negative weight for n <= 10".into()
    });
    if let Some(w) = witness {
        println!("      witness: {w}");
    }
    c
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "1 induced weight identity (d=2, n<=12; points n<=7)",
            induced_identity,
        ),
        (
            "2 positivity and zero-weight owners (d=1,2, n<=12)",
            positivity,
        ),
        ("3 d=2 certification (n<=4; uniqueness n<=3)", theorem_d2),
        ("4 d=1 certification (n<=5; set counts n<=4)", results_d1),
        ("5 closed-form suites", closed_forms),
        (
            "6 generic vs fast paths and tie-order invariance",
            path_equivalence,
        ),
        ("7 Boolean lattice (n<=15; oracle n<=4)", sperner),
        ("8 k=1 candidate size 3^(n-1) (n<=14)", k1_closed_form),
        ("9 density deviation at n=100 below 1e-10", density),
        ("10 anti-basic family yields a negative weight", anti_basic),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let check = f();
        let verdict = if check.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        if !check.failures.is_empty() {
            failed += 1;
        }
        println!(
            "{verdict} criterion {name}: {} [{:.1}s]",
            check.summary(),
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
