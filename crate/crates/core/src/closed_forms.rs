//! Evaluators for the summation objects behind the positivity argument:
//! figurate numbers, S and S' (as sums and in closed form), R and R' over a
//! weight table, D, U, F_k and the mod-(k+1) layer sums.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{binom_i, binom_signed, trinomial};
use crate::weights::WeightTable;

/// Which evaluation path to take for S and S'.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Via {
    Sum,
    Closed,
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// P_d(i) by iterated prefix sums of the indicator of i > 0.
pub fn figurate(d: u32, i: i64) -> BigInt {
    if i <= 0 {
        return BigInt::zero();
    }
    let mut row: Vec<BigInt> = vec![BigInt::one(); i as usize];
    for _ in 0..d {
        let mut acc = BigInt::zero();
        for v in row.iter_mut() {
            acc += &*v;
            *v = acc.clone();
        }
    }
    row.pop().expect("row is non-empty")
}

/// P_d(i) = C(i+d-1, d) for d > 0.
pub fn figurate_closed(d: u32, i: i64) -> BigInt {
    if d == 0 {
        return if i > 0 { BigInt::one() } else { BigInt::zero() };
    }
    binom_signed(i + i64::from(d) - 1, i64::from(d))
}

/// S(d,a,c) = sum over i >= a of P_d(i-a+1) T(i,c) (-1)^(i-a).
pub fn s_eval(n: u32, d: u32, a: i64, c: i64, via: Via) -> BigInt {
    let ni = i64::from(n);
    if c < 0 || a < 0 {
        return BigInt::zero();
    }
    match via {
        Via::Sum => (a..=ni - c)
            .map(|i| figurate_closed(d, i - a + 1) * trinomial(ni, i, c) * sign(i - a))
            .sum(),
        Via::Closed => {
            if a + c > ni {
                return BigInt::zero();
            }
            binom_i(ni, c) * binom_signed(ni - c - i64::from(d) - 1, ni - a - c)
        }
    }
}

/// S'(d,a,c) = sum over i >= c of P_d(i-c+1) T(a,i) (-1)^(i-c).
pub fn s_prime_eval(n: u32, d: u32, a: i64, c: i64, via: Via) -> BigInt {
    let ni = i64::from(n);
    if c < 0 || a < 0 {
        return BigInt::zero();
    }
    match via {
        Via::Sum => (c..=ni - a)
            .map(|i| figurate_closed(d, i - c + 1) * trinomial(ni, a, i) * sign(i - c))
            .sum(),
        Via::Closed => {
            if a + c > ni {
                return BigInt::zero();
            }
            binom_i(ni, a) * binom_signed(ni - a - i64::from(d) - 1, ni - a - c)
        }
    }
}

/// D(d,A,C) = S(d,A,C) - S(d,A+1,C-1).
pub fn d_eval(n: u32, d: u32, a: i64, c: i64) -> BigInt {
    s_eval(n, d, a, c, Via::Closed) - s_eval(n, d, a + 1, c - 1, Via::Closed)
}

/// R(d,a,c) = sum over i >= a of P_d(i-a+1) W(i,c) (-1)^(i-a).
pub fn r_eval(table: &WeightTable, d: u32, a: i64, c: i64) -> BigRational {
    let ni = i64::from(table.n);
    if c < 0 {
        return BigRational::zero();
    }
    (a.max(0)..=ni - c)
        .map(|i| {
            let coef = figurate_closed(d, i - a + 1) * sign(i - a);
            table.w(i, c) * BigRational::from_integer(coef)
        })
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// R'(d,a,c) = sum over i >= c of P_d(i-c+1) W(a,i) (-1)^(i-c).
pub fn r_prime_eval(table: &WeightTable, d: u32, a: i64, c: i64) -> BigRational {
    let ni = i64::from(table.n);
    if a < 0 {
        return BigRational::zero();
    }
    (c.max(0)..=ni - a)
        .map(|i| {
            let coef = figurate_closed(d, i - c + 1) * sign(i - c);
            table.w(a, i) * BigRational::from_integer(coef)
        })
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// U(a,c) for d=2, tabulated once per (n,k).
#[derive(Clone, Debug)]
pub struct UTable {
    pub n: u32,
    pub k: u32,
    /// rows[a][c] for c <= min(a, n-a)
    rows: Vec<Vec<BigInt>>,
}

impl UTable {
    pub fn new(n: u32, k: u32) -> Self {
        let ni = i64::from(n);
        let mut table = UTable {
            n,
            k,
            rows: vec![Vec::new(); n as usize + 1],
        };
        let ki = i64::from(k);
        for a in (0..=ni).rev() {
            let cmax = a.min(ni - a);
            let mut row = Vec::with_capacity(cmax as usize + 1);
            for c in 0..=cmax {
                let v = trinomial(ni, a, c) - trinomial(ni, a + 1, c - 1) - table.get(a + 1, c)
                    + table.get(a + 1 + ki, c - 1 - ki)
                    + table.get(a + 1 + ki, c - ki);
                row.push(v);
            }
            table.rows[a as usize] = row;
        }
        table
    }

    /// 0 outside the simplex, U(c,a) when a < c.
    pub fn get(&self, a: i64, c: i64) -> BigInt {
        let ni = i64::from(self.n);
        if a < 0 || c < 0 || a + c > ni {
            return BigInt::zero();
        }
        let (a, c) = if a < c { (c, a) } else { (a, c) };
        self.rows[a as usize]
            .get(c as usize)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }
}

/// U(m) for d=1: for 2m <= n the sum of C(n,i) - C(n,i-1) over i <= m with
/// i = m mod (k+1); otherwise the sum of C(n,i) - C(n,i+1) over i >= m.
pub fn u_d1(n: u32, k: u32, m: i64) -> BigInt {
    let (ni, step) = (i64::from(n), i64::from(k) + 1);
    if m < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::zero();
    if 2 * m <= ni {
        let mut i = m;
        while i >= 0 {
            acc += binom_i(ni, i) - binom_i(ni, i - 1);
            i -= step;
        }
    } else {
        let mut i = m;
        while i <= ni {
            acc += binom_i(ni, i) - binom_i(ni, i + 1);
            i += step;
        }
    }
    acc
}

/// Smallest c >= lo with c = target mod step.
fn first_in_class(target: i64, lo: i64, step: i64) -> i64 {
    lo + (target - lo).rem_euclid(step)
}

/// F_k(n,B,C): the double sum over c = C mod (k+1) in [-B, n] and
/// 0 <= i <= B of C(n,c+i) C(l+B-i, B-i) C(c+l+i, c+l) (-1)^(B-i),
/// with l = (C-c)/(k+1). Zero when B < 0 or C < 0.
pub fn f_eval(n: u32, k: u32, b: i64, c_cap: i64) -> BigInt {
    if b < 0 || c_cap < 0 {
        return BigInt::zero();
    }
    let (ni, step) = (i64::from(n), i64::from(k) + 1);
    let mut acc = BigInt::zero();
    let mut c = first_in_class(c_cap, -b, step);
    while c <= ni {
        let l = (c_cap - c) / step;
        for i in 0.max(-c)..=b {
            if c + i > ni {
                break;
            }
            let x = binom_i(ni, c + i);
            let y = binom_signed(l + b - i, b - i);
            if y.is_zero() {
                continue;
            }
            let z = binom_signed(c + l + i, c + l);
            if z.is_zero() {
                continue;
            }
            acc += x * y * z * sign(b - i);
        }
        c += step;
    }
    acc
}

/// One half of the double sum expressing U(A,C) - U(A-k,C+k): the sum over
/// c = C mod (k+1) and j >= 0 of C(l,j) C(n,c+j) C(n-c-j-l-1, B-j).
pub fn double_sum_part(n: u32, k: u32, b: i64, c_cap: i64) -> BigInt {
    if b < 0 || c_cap < 0 {
        return BigInt::zero();
    }
    let (ni, step) = (i64::from(n), i64::from(k) + 1);
    let mut acc = BigInt::zero();
    let mut c = first_in_class(c_cap, -b, step);
    while c <= ni {
        let l = (c_cap - c) / step;
        for j in 0.max(-c)..=b {
            if c + j > ni {
                break;
            }
            let x = binom_signed(l, j);
            if x.is_zero() {
                continue;
            }
            acc += x * binom_i(ni, c + j) * binom_signed(ni - c - j - l - 1, b - j);
        }
        c += step;
    }
    acc
}

/// B(n,m): sum of C(n,i) over i = m mod (k+1).
pub fn layer_mod_sum(n: u32, k: u32, m: i64) -> BigInt {
    let (ni, step) = (i64::from(n), i64::from(k) + 1);
    let mut acc = BigInt::zero();
    let mut i = m.rem_euclid(step);
    while i <= ni {
        acc += binom_i(ni, i);
        i += step;
    }
    acc
}

/// Twice the distance from n/2 to the closest i in [0, n] with i = m mod (k+1).
pub fn closest_distance2(n: u32, k: u32, m: i64) -> i64 {
    let (ni, step) = (i64::from(n), i64::from(k) + 1);
    let mut best = i64::MAX;
    let mut i = m.rem_euclid(step);
    while i <= ni {
        best = best.min((2 * i - ni).abs());
        i += step;
    }
    best
}

/// Ordering of B(n,m) against B(n,m') together with the ordering the
/// closest-element criterion predicts (closer residue class is larger).
pub fn layer_mod_compare(n: u32, k: u32, m: i64, m2: i64) -> (Ordering, Ordering) {
    let actual = layer_mod_sum(n, k, m).cmp(&layer_mod_sum(n, k, m2));
    let predicted = closest_distance2(n, k, m2).cmp(&closest_distance2(n, k, m));
    (actual, predicted)
}
