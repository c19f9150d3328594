//! Continued fractions via the Gauss map, Ford-circle geometry, and the
//! arithmetic control of curvature growth along convergents.
//!
//! Numerators and denominators are exact 64-bit integers with overflow
//! detection; only the input value and the approximation errors are floating.

use crate::error::{Error, Result};

/// Digit guard: a floating 1/x within this distance of an integer makes
/// further float digits untrustworthy.
const DIGIT_GUARD: f64 = 1e-12;

/// One application of the Gauss map T(x) = frac(1/x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussStep {
    /// Digit floor(1/x) and the next value T(x).
    Step { digit: i64, next: f64 },
    /// x = 0: the expansion terminates.
    Terminated,
}

pub fn gauss_map(x: f64) -> Result<GaussStep> {
    if x == 0.0 {
        return Ok(GaussStep::Terminated);
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::HypothesisViolation(format!("gauss map wants x in (0,1), got {x}")));
    }
    let y = 1.0 / x;
    let digit = y.floor() as i64;
    Ok(GaussStep::Step { digit, next: y - y.floor() })
}

/// Exact or symbolic continued-fraction inputs. Rational inputs terminate by
/// exact Euclidean division; the two named quadratic irrationals have exact
/// constant digit streams; float inputs fall back to guarded Gauss iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CfInput {
    Rational { num: i64, den: i64 },
    /// (sqrt(5) - 1) / 2, digits all 1.
    Golden,
    /// sqrt(2) - 1, digits all 2.
    Sqrt2MinusOne,
    Float(f64),
}

impl CfInput {
    pub fn value(&self) -> f64 {
        match *self {
            CfInput::Rational { num, den } => num as f64 / den as f64,
            CfInput::Golden => (5.0f64.sqrt() - 1.0) / 2.0,
            CfInput::Sqrt2MinusOne => 2.0f64.sqrt() - 1.0,
            CfInput::Float(x) => x,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConvergentRow {
    pub k: usize,
    /// Continued-fraction digit a_k >= 1 (0 on the base row k = 0, which
    /// holds the convergent 0/1).
    pub a: i64,
    pub p: i64,
    pub q: i64,
    /// Ford curvature 2 q^2.
    pub kappa: f64,
    /// |x - p/q|.
    pub err: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergentTable {
    pub rows: Vec<ConvergentRow>,
    /// The expansion ended exactly (rational input).
    pub terminated: bool,
    /// 64-bit p or q would overflow; table cut short.
    pub truncated_overflow: bool,
    /// Float digits became untrustworthy; table cut short.
    pub unreliable_stop: bool,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Digit source for the convergent recurrence.
enum Digits {
    Rational { num: i64, den: i64 },
    Constant(i64),
    Float { x: f64, err: f64 },
}

impl Digits {
    /// Next digit, or None when terminated, or Err-style unreliable flag.
    fn next(&mut self) -> (Option<i64>, bool) {
        match self {
            Digits::Rational { num, den } => {
                // x = num/den in (0,1): digit = floor(den/num), then
                // (num, den) <- (den mod num, num).
                if *num == 0 {
                    return (None, false);
                }
                let a = *den / *num;
                let rem = *den % *num;
                *den = *num;
                *num = rem;
                (Some(a), false)
            }
            Digits::Constant(a) => (Some(*a), false),
            Digits::Float { x, err } => {
                if *x == 0.0 {
                    return (None, false);
                }
                let y = 1.0 / *x;
                let nearest = y.round();
                // Untrustworthy when 1/x sits within the accumulated error of
                // an integer, or the amplified input error passes the guard.
                if (y - nearest).abs() < DIGIT_GUARD.max(*err) || *err > DIGIT_GUARD {
                    return (None, true);
                }
                let a = y.floor();
                // The Gauss map amplifies absolute error by |T'| = 1/x^2.
                *err *= y * y;
                *x = y - a;
                (Some(a as i64), false)
            }
        }
    }
}

/// Continued-fraction convergents p_k/q_k of x, with at most `n` rows
/// (n <= 40 guards 64-bit overflow for generic digit streams).
pub fn convergents(input: CfInput, n: usize) -> Result<ConvergentTable> {
    if n > 40 {
        return Err(Error::HypothesisViolation(format!("n = {n} exceeds the overflow guard 40")));
    }
    let x = input.value();
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::HypothesisViolation(format!("convergents want x in (0,1), got {x}")));
    }
    let mut digits = match input {
        CfInput::Rational { num, den } => {
            if num <= 0 || den <= 0 || num >= den {
                return Err(Error::HypothesisViolation(
                    "rational input must satisfy 0 < num < den".into(),
                ));
            }
            let g = gcd(num, den);
            Digits::Rational { num: num / g, den: den / g }
        }
        CfInput::Golden => Digits::Constant(1),
        CfInput::Sqrt2MinusOne => Digits::Constant(2),
        CfInput::Float(v) => Digits::Float { x: v, err: f64::EPSILON },
    };
    let mut rows = Vec::new();
    let (mut p_prev, mut p_cur) = (1i64, 0i64);
    let (mut q_prev, mut q_cur) = (0i64, 1i64);
    // Base row k = 0: the convergent 0/1 (digit column 0 by convention).
    rows.push(ConvergentRow { k: 0, a: 0, p: 0, q: 1, kappa: 2.0, err: x });
    let mut terminated = false;
    let mut truncated_overflow = false;
    let mut unreliable_stop = false;
    for k in 1..=n {
        let (digit, unreliable) = digits.next();
        if unreliable {
            unreliable_stop = true;
            break;
        }
        let Some(a) = digit else {
            terminated = true;
            break;
        };
        debug_assert!(a >= 1);
        let p_next = a.checked_mul(p_cur).and_then(|v| v.checked_add(p_prev));
        let q_next = a.checked_mul(q_cur).and_then(|v| v.checked_add(q_prev));
        let (Some(p), Some(q)) = (p_next, q_next) else {
            truncated_overflow = true;
            break;
        };
        (p_prev, p_cur) = (p_cur, p);
        (q_prev, q_cur) = (q_cur, q);
        let err = (x - p as f64 / q as f64).abs();
        rows.push(ConvergentRow { k, a, p, q, kappa: 2.0 * (q as f64) * (q as f64), err });
    }
    Ok(ConvergentTable { rows, terminated, truncated_overflow, unreliable_stop })
}

/// Ford circle of the reduced fraction p/q: center (p/q, 1/(2q^2)),
/// radius 1/(2q^2), tangent to the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FordCircle {
    pub p: i64,
    pub q: i64,
}

pub fn ford_circle(p: i64, q: i64) -> Result<FordCircle> {
    if q < 1 {
        return Err(Error::InvalidShape(format!("ford circle wants q >= 1, got {q}")));
    }
    if gcd(p, q) != 1 {
        return Err(Error::InvalidShape(format!("{p}/{q} is not a reduced fraction")));
    }
    Ok(FordCircle { p, q })
}

impl FordCircle {
    pub fn center(&self) -> (f64, f64) {
        (self.p as f64 / self.q as f64, self.radius())
    }

    pub fn radius(&self) -> f64 {
        0.5 / (self.q as f64 * self.q as f64)
    }

    pub fn curvature(&self) -> f64 {
        2.0 * self.q as f64 * self.q as f64
    }

    /// Exact tangency test: |p q' - p' q| = 1.
    pub fn is_tangent_to(&self, other: &FordCircle) -> bool {
        let det = self.p as i128 * other.q as i128 - other.p as i128 * self.q as i128;
        det * det == 1
    }

    /// |center distance ^2 - (r1 + r2)^2|, the floating tangency residual.
    pub fn tangency_residual(&self, other: &FordCircle) -> f64 {
        let (x1, y1) = self.center();
        let (x2, y2) = other.center();
        let d2 = (x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2);
        let rs = self.radius() + other.radius();
        (d2 - rs * rs).abs()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RatioRow {
    pub k: usize,
    /// kappa_{k+1} / kappa_k, computed from the exact integers.
    pub kappa_ratio: f64,
    /// (q_{k+1} / q_k)^2, the same quantity by construction.
    pub q_ratio_sq: f64,
    /// a_{k+1}^2, the large-digit approximation.
    pub a_next_sq: f64,
}

/// Ratio table of successive Ford curvatures along the convergents of x.
pub fn curvature_ratio_table(input: CfInput, n: usize) -> Result<Vec<RatioRow>> {
    let table = convergents(input, n)?;
    let mut rows = Vec::new();
    for w in table.rows.windows(2) {
        let (r0, r1) = (w[0], w[1]);
        // kappa_{k+1}/kappa_k = (q_{k+1}/q_k)^2 is one identity; both columns
        // are evaluated from the same exact-integer expression.
        let ratio = r1.kappa / r0.kappa;
        rows.push(RatioRow {
            k: r0.k,
            kappa_ratio: ratio,
            q_ratio_sq: ratio,
            a_next_sq: (r1.a * r1.a) as f64,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_map_examples() {
        // x = 0.5: exact digit 2, T = 0.
        match gauss_map(0.5).unwrap() {
            GaussStep::Step { digit, next } => {
                assert_eq!(digit, 2);
                assert_eq!(next, 0.0);
            }
            _ => panic!("expected a step"),
        }
        // Golden ratio is the fixed point with digit 1.
        let x = (5.0f64.sqrt() - 1.0) / 2.0;
        match gauss_map(x).unwrap() {
            GaussStep::Step { digit, next } => {
                assert_eq!(digit, 1);
                assert!((next - x).abs() < 1e-15);
            }
            _ => panic!(),
        }
        // x = 2/7: 1/x = 3.5, digit 3, T = 0.5.
        match gauss_map(2.0 / 7.0).unwrap() {
            GaussStep::Step { digit, next } => {
                assert_eq!(digit, 3);
                assert!((next - 0.5).abs() < 1e-15);
            }
            _ => panic!(),
        }
        assert_eq!(gauss_map(0.0).unwrap(), GaussStep::Terminated);
    }

    #[test]
    fn golden_convergents_are_fibonacci() {
        let t = convergents(CfInput::Golden, 7).unwrap();
        let qs: Vec<i64> = t.rows.iter().map(|r| r.q).collect();
        assert_eq!(qs, vec![1, 1, 2, 3, 5, 8, 13, 21]);
        assert!(t.rows.iter().skip(1).all(|r| r.a == 1));
    }

    #[test]
    fn rational_two_sevenths_terminates() {
        let t = convergents(CfInput::Rational { num: 2, den: 7 }, 10).unwrap();
        assert!(t.terminated);
        let pq: Vec<(i64, i64)> = t.rows.iter().map(|r| (r.p, r.q)).collect();
        assert_eq!(pq, vec![(0, 1), (1, 3), (2, 7)]);
        let digits: Vec<i64> = t.rows.iter().map(|r| r.a).collect();
        assert_eq!(digits, vec![0, 3, 2]);
        assert_eq!(t.rows[2].err, 0.0);
    }

    #[test]
    fn convergent_invariants_hold() {
        for input in [
            CfInput::Golden,
            CfInput::Sqrt2MinusOne,
            CfInput::Rational { num: 355, den: 1130 },
            CfInput::Float(0.37283974982374),
        ] {
            let x = input.value();
            let t = convergents(input, 20).unwrap();
            assert!(!t.rows.is_empty());
            // Base row included: q_{-1} = 0 by convention.
            let mut q_prev = 0i64;
            for (i, r) in t.rows.iter().enumerate() {
                assert_eq!(gcd(r.p, r.q), 1, "coprime p/q");
                assert!(r.a >= 1 || r.k == 0);
                // Classical bound |x - p/q| q^2 <= 1.
                assert!(r.err * (r.q as f64) * (r.q as f64) <= 1.0 + 1e-9);
                if i + 1 < t.rows.len() {
                    let r1 = t.rows[i + 1];
                    // q_{k+1} = a_{k+1} q_k + q_{k-1}.
                    assert_eq!(r1.q, r1.a * r.q + q_prev);
                    // |x - p/q| <= 1/(q q').
                    assert!(r.err <= 1.0 / (r.q as f64 * r1.q as f64) + 1e-15);
                    // Consecutive convergents are Farey neighbors.
                    let det = r.p as i128 * r1.q as i128 - r1.p as i128 * r.q as i128;
                    assert_eq!(det * det, 1);
                }
                q_prev = r.q;
            }
            let _ = x;
        }
    }

    #[test]
    fn ford_circle_examples() {
        let f12 = ford_circle(1, 2).unwrap();
        assert_eq!(f12.center(), (0.5, 0.125));
        assert_eq!(f12.radius(), 0.125);
        let f01 = ford_circle(0, 1).unwrap();
        assert_eq!(f01.center(), (0.0, 0.5));
        assert_eq!(f01.radius(), 0.5);
        // (1,3) vs (1,2): |1*2 - 1*3| = 1, tangent; center-distance check.
        let f13 = ford_circle(1, 3).unwrap();
        assert!(f13.is_tangent_to(&f12));
        assert!(f13.tangency_residual(&f12) < 1e-15);
        let d2 = (1.0 / 6.0f64) * (1.0 / 6.0) + (0.125 - 1.0 / 18.0) * (0.125 - 1.0 / 18.0);
        assert!((d2 - 0.0326003).abs() < 1e-7);
        assert!(ford_circle(2, 4).is_err());
    }

    #[test]
    fn curvature_ratio_identities() {
        let rows = curvature_ratio_table(CfInput::Golden, 14).unwrap();
        for r in &rows {
            assert_eq!(r.kappa_ratio, r.q_ratio_sq, "exact identity");
        }
        // Row k = 0 compares q_0 = 1 against q_1 = a_1: ratio = a_1^2 = 1.
        assert_eq!(rows[0].k, 0);
        assert_eq!(rows[0].kappa_ratio, 1.0);
        // Fibonacci ratio squared: within 2e-4 at k = 10, 1e-4 from k = 11 on.
        let phi2 = ((1.0 + 5.0f64.sqrt()) / 2.0).powi(2);
        let at10 = rows.iter().find(|r| r.k == 10).unwrap();
        assert!((at10.kappa_ratio - phi2).abs() < 2e-4, "{}", at10.kappa_ratio);
        for r in rows.iter().filter(|r| r.k >= 11) {
            assert!((r.kappa_ratio - phi2).abs() < 1e-4, "k={} {}", r.k, r.kappa_ratio);
        }
        // First row from q0 = 1: ratio = a1^2 exactly... k=1 row compares
        // q2/q1 against a2^2; check the documented digit bracket instead.
        for r in &rows {
            let a = r.a_next_sq.sqrt();
            assert!(r.q_ratio_sq >= a * a - 1e-9 && r.q_ratio_sq <= (a + 1.0) * (a + 1.0) + 1e-9);
        }
    }

    #[test]
    fn large_digit_ratio_bracket() {
        // 11/13 = [0; 1, 5, 2]: at the a = 5 step the curvature ratio lies
        // between a^2 and (a+1)^2.
        let t = convergents(CfInput::Rational { num: 11, den: 13 }, 6).unwrap();
        let digits: Vec<i64> = t.rows.iter().skip(1).map(|r| r.a).collect();
        assert_eq!(digits, vec![1, 5, 2]);
        let rows = curvature_ratio_table(CfInput::Rational { num: 11, den: 13 }, 6).unwrap();
        let r = rows.iter().find(|r| (r.a_next_sq - 25.0).abs() < 1e-12).unwrap();
        assert!(r.q_ratio_sq >= 25.0 && r.q_ratio_sq <= 36.0);
    }

    #[test]
    fn float_guard_stops_near_integer_reciprocals() {
        // 2/7 as a float hits the guard at the second digit instead of
        // emitting garbage digits.
        let t = convergents(CfInput::Float(2.0 / 7.0), 10).unwrap();
        assert!(t.unreliable_stop || t.terminated);
        assert!(t.rows.len() >= 2);
        assert_eq!((t.rows[1].p, t.rows[1].q), (1, 3));
    }
}
