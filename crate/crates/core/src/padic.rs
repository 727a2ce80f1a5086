//! Bounded-precision arithmetic in `Q_p`.
//!
//! A nonzero [`PadicNumber`] is `p^v * u` with `u` a unit known modulo `p^N`;
//! `N` is the relative precision. Values that cancel to zero within the
//! known digits become `O(p^k)` ("zero to precision"), which is kept
//! distinct from the exact zero.
//!
//! Precision rules, applied everywhere:
//! * sums keep the minimum absolute precision of the operands;
//! * products and quotients keep the minimum relative precision;
//! * `iwasawa_log` of an element with relative precision `N` has absolute
//!   precision `N` (`N - 1` when `p = 2`).

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

thread_local! {
    static POW_CACHE: RefCell<HashMap<(u32, u32), BigUint>> = RefCell::new(HashMap::new());
}

/// `p^e`, memoized per thread.
pub fn prime_power(p: u32, e: u32) -> BigUint {
    POW_CACHE.with(|cache| {
        cache
            .borrow_mut()
            .entry((p, e))
            .or_insert_with(|| BigUint::from(p).pow(e))
            .clone()
    })
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Working parameters shared by every p-adic computation of a run.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PadicConfig {
    pub prime: u32,
    /// Default relative precision `N`.
    pub precision: u32,
    /// Largest truncation length any iterative product may reach.
    pub max_truncation: usize,
    /// Digits sacrificed in equality tests.
    pub slack: u32,
}

impl PadicConfig {
    pub fn new(prime: u32, precision: u32) -> Result<Self> {
        let cfg = PadicConfig {
            prime,
            precision,
            max_truncation: 64,
            slack: 2,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_slack(mut self, slack: u32) -> Result<Self> {
        self.slack = slack;
        self.validate()?;
        Ok(self)
    }

    pub fn with_max_truncation(mut self, l: usize) -> Self {
        self.max_truncation = l;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.prime) {
            return Err(Error::Domain(format!("{} is not prime", self.prime)));
        }
        if self.precision < 4 {
            return Err(Error::Domain(format!(
                "precision {} is below the minimum of 4",
                self.precision
            )));
        }
        if self.slack >= self.precision {
            return Err(Error::Domain(format!(
                "slack {} must be smaller than precision {}",
                self.slack, self.precision
            )));
        }
        Ok(())
    }

    /// Digits that comparisons are expected to hold to.
    pub fn check_digits(&self) -> u32 {
        self.precision - self.slack
    }

    pub fn int(&self, n: i64) -> PadicNumber {
        PadicNumber::from_int(n, self.prime, self.precision)
    }

    pub fn rational(&self, num: i64, den: i64) -> PadicNumber {
        PadicNumber::from_rational(&BigInt::from(num), &BigInt::from(den), self.prime, self.precision)
            .expect("nonzero denominator")
    }

    pub fn parse(&self, text: &str) -> Result<PadicNumber> {
        PadicNumber::parse(text, self)
    }
}

#[derive(Clone, Debug)]
enum Repr {
    ExactZero,
    /// Zero modulo `p^abs`.
    Approx0 { abs: i64 },
    Unit { val: i64, unit: BigUint, prec: u32 },
}

/// An element of `Q_p` known to bounded precision.
#[derive(Clone, Debug)]
pub struct PadicNumber {
    prime: u32,
    repr: Repr,
}

fn p_adic_valuation(n: &BigUint, p: u32) -> u32 {
    debug_assert!(!n.is_zero());
    let pb = BigUint::from(p);
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

fn split_p(n: &BigInt, p: u32) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (k, m);
        }
        m = q;
        k += 1;
    }
}

fn mod_floor_big(n: &BigInt, m: &BigUint) -> BigUint {
    let mb = BigInt::from_biguint(Sign::Plus, m.clone());
    n.mod_floor(&mb).to_biguint().expect("nonnegative residue")
}

impl PadicNumber {
    pub fn exact_zero(prime: u32) -> Self {
        PadicNumber {
            prime,
            repr: Repr::ExactZero,
        }
    }

    /// `O(p^abs)`.
    pub fn zero_to(prime: u32, abs: i64) -> Self {
        PadicNumber {
            prime,
            repr: Repr::Approx0 { abs },
        }
    }

    pub fn one(prime: u32, precision: u32) -> Self {
        Self::from_int(1, prime, precision)
    }

    pub fn from_int(n: i64, prime: u32, precision: u32) -> Self {
        Self::from_rational(&BigInt::from(n), &BigInt::one(), prime, precision)
            .expect("denominator is one")
    }

    /// Canonical image of `num/den` with relative precision `precision`.
    pub fn from_rational(num: &BigInt, den: &BigInt, prime: u32, precision: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::exact_zero(prime));
        }
        let (vn, un) = split_p(num, prime);
        let (vd, ud) = split_p(den, prime);
        let modulus = prime_power(prime, precision);
        let un = mod_floor_big(&un, &modulus);
        let ud = mod_floor_big(&ud, &modulus);
        let inv = ud
            .modinv(&modulus)
            .ok_or_else(|| Error::Domain("denominator not invertible".into()))?;
        Ok(PadicNumber {
            prime,
            repr: Repr::Unit {
                val: vn as i64 - vd as i64,
                unit: (un * inv) % &modulus,
                prec: precision,
            },
        })
    }

    /// `p^val * unit` with the unit reduced modulo `p^prec`; `unit` must be prime to `p`.
    pub fn from_parts(prime: u32, val: i64, unit: BigUint, prec: u32) -> Result<Self> {
        if prec == 0 {
            return Err(Error::Precision("relative precision must be positive".into()));
        }
        let modulus = prime_power(prime, prec);
        let unit = unit % &modulus;
        if (&unit % BigUint::from(prime)).is_zero() {
            return Err(Error::Domain("unit part divisible by p".into()));
        }
        Ok(PadicNumber {
            prime,
            repr: Repr::Unit { val, unit, prec },
        })
    }

    /// Builds `p^base_val * residue` where `residue` is known modulo `p^digits`.
    fn normalize(prime: u32, base_val: i64, residue: BigUint, digits: i64) -> Self {
        if digits <= 0 {
            return Self::zero_to(prime, base_val + digits.max(0));
        }
        let residue = residue % prime_power(prime, digits as u32);
        if residue.is_zero() {
            return Self::zero_to(prime, base_val + digits);
        }
        let k = p_adic_valuation(&residue, prime);
        let unit = residue / prime_power(prime, k);
        PadicNumber {
            prime,
            repr: Repr::Unit {
                val: base_val + k as i64,
                unit,
                prec: (digits - k as i64) as u32,
            },
        }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    /// `None` for zero (exact or to precision).
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Unit { val, .. } => Some(*val),
            _ => None,
        }
    }

    /// Lower bound on the valuation; `None` for exact zero.
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Approx0 { abs } => Some(*abs),
            Repr::Unit { val, .. } => Some(*val),
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    pub fn relative_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Unit { prec, .. } => Some(*prec),
            _ => None,
        }
    }

    /// Absolute precision `v + N`; `None` for exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Approx0 { abs } => Some(*abs),
            Repr::Unit { val, prec, .. } => Some(val + *prec as i64),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::ExactZero)
    }

    /// True for exact zero and for `O(p^k)`.
    pub fn is_zero(&self) -> bool {
        !matches!(self.repr, Repr::Unit { .. })
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Lowers the relative precision to at most `prec`.
    pub fn truncate(&self, prec: u32) -> Self {
        match &self.repr {
            Repr::Unit { val, unit, prec: n } if prec < *n => {
                if prec == 0 {
                    return Self::zero_to(self.prime, *val);
                }
                PadicNumber {
                    prime: self.prime,
                    repr: Repr::Unit {
                        val: *val,
                        unit: unit % prime_power(self.prime, prec),
                        prec,
                    },
                }
            }
            _ => self.clone(),
        }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(
            self.prime, other.prime,
            "mixing {}-adic and {}-adic numbers",
            self.prime, other.prime
        );
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) => other.clone(),
            (_, Repr::ExactZero) => self.clone(),
            (Repr::Approx0 { abs: a }, Repr::Approx0 { abs: b }) => Self::zero_to(self.prime, *a.min(b)),
            (Repr::Approx0 { abs }, Repr::Unit { .. }) => other.with_abs_cap(*abs),
            (Repr::Unit { .. }, Repr::Approx0 { abs }) => self.with_abs_cap(*abs),
            (
                Repr::Unit {
                    val: v1,
                    unit: u1,
                    prec: n1,
                },
                Repr::Unit {
                    val: v2,
                    unit: u2,
                    prec: n2,
                },
            ) => {
                let abs = (v1 + *n1 as i64).min(v2 + *n2 as i64);
                let vmin = *v1.min(v2);
                let digits = abs - vmin;
                if digits <= 0 {
                    return Self::zero_to(self.prime, abs);
                }
                let modulus = prime_power(self.prime, digits as u32);
                let shift = |v: i64, u: &BigUint| -> BigUint {
                    let s = (v - vmin) as u64;
                    if s >= digits as u64 {
                        BigUint::zero()
                    } else {
                        (u * prime_power(self.prime, s as u32)) % &modulus
                    }
                };
                let sum = (shift(*v1, u1) + shift(*v2, u2)) % &modulus;
                Self::normalize(self.prime, vmin, sum, digits)
            }
        }
    }

    /// Caps the absolute precision at `abs`.
    fn with_abs_cap(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::Unit { val, prec, .. } => {
                if abs <= *val {
                    Self::zero_to(self.prime, abs)
                } else if abs < val + *prec as i64 {
                    self.truncate((abs - val) as u32)
                } else {
                    self.clone()
                }
            }
            Repr::Approx0 { abs: a } => Self::zero_to(self.prime, abs.min(*a)),
            Repr::ExactZero => Self::zero_to(self.prime, abs),
        }
    }

    pub fn neg_ref(&self) -> Self {
        match &self.repr {
            Repr::Unit { val, unit, prec } => {
                let modulus = prime_power(self.prime, *prec);
                PadicNumber {
                    prime: self.prime,
                    repr: Repr::Unit {
                        val: *val,
                        unit: (&modulus - unit) % &modulus,
                        prec: *prec,
                    },
                }
            }
            _ => self.clone(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => Self::exact_zero(self.prime),
            (Repr::Approx0 { abs: a }, Repr::Approx0 { abs: b }) => Self::zero_to(self.prime, a + b),
            (Repr::Approx0 { abs }, Repr::Unit { val, .. }) | (Repr::Unit { val, .. }, Repr::Approx0 { abs }) => {
                Self::zero_to(self.prime, abs + val)
            }
            (
                Repr::Unit {
                    val: v1,
                    unit: u1,
                    prec: n1,
                },
                Repr::Unit {
                    val: v2,
                    unit: u2,
                    prec: n2,
                },
            ) => {
                let prec = *n1.min(n2);
                let modulus = prime_power(self.prime, prec);
                PadicNumber {
                    prime: self.prime,
                    repr: Repr::Unit {
                        val: v1 + v2,
                        unit: (u1 * u2) % modulus,
                        prec,
                    },
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        match &self.repr {
            Repr::Unit { val, unit, prec } => {
                let modulus = prime_power(self.prime, *prec);
                let inv = unit
                    .modinv(&modulus)
                    .ok_or_else(|| Error::Domain("unit part not invertible".into()))?;
                Ok(PadicNumber {
                    prime: self.prime,
                    repr: Repr::Unit {
                        val: -val,
                        unit: inv,
                        prec: *prec,
                    },
                })
            }
            _ => Err(Error::Precision("inverse of zero".into())),
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inverse()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        match &self.repr {
            Repr::Unit { val, unit, prec } => {
                let modulus = prime_power(self.prime, *prec);
                Ok(PadicNumber {
                    prime: self.prime,
                    repr: Repr::Unit {
                        val: val * n,
                        unit: unit.modpow(&BigUint::from(n as u64), &modulus),
                        prec: *prec,
                    },
                })
            }
            _ if n == 0 => Err(Error::Domain("zero to the zeroth power".into())),
            Repr::ExactZero => Ok(self.clone()),
            Repr::Approx0 { abs } => Ok(Self::zero_to(self.prime, abs * n)),
        }
    }

    /// True when `self` and `other` agree to `digits` digits relative to the
    /// smaller valuation, or to all available digits if fewer are known.
    pub fn approx_eq(&self, other: &Self, digits: u32) -> bool {
        self.check_prime(other);
        let diff = self.sub_ref(other);
        if diff.is_zero() {
            return true;
        }
        let base = match (self.valuation_lower_bound(), other.valuation_lower_bound()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return true,
        };
        diff.valuation().expect("nonzero difference") >= base + digits as i64
    }

    /// True when `self = 1` to `digits` relative digits.
    pub fn is_one_to(&self, digits: u32) -> bool {
        let one = PadicNumber::one(self.prime, digits.max(1));
        self.approx_eq(&one, digits)
    }

    /// The `(p-1)`-st root of unity congruent to `self` modulo `p`.
    pub fn teichmuller(&self) -> Result<Self> {
        match &self.repr {
            Repr::Unit { val: 0, unit, prec } => {
                let modulus = prime_power(self.prime, *prec);
                let p = BigUint::from(self.prime);
                let mut t = unit.clone();
                for _ in 0..*prec {
                    t = t.modpow(&p, &modulus);
                }
                Ok(PadicNumber {
                    prime: self.prime,
                    repr: Repr::Unit {
                        val: 0,
                        unit: t,
                        prec: *prec,
                    },
                })
            }
            _ => Err(Error::Domain("Teichmüller lift of a nonunit".into())),
        }
    }

    /// The Iwasawa branch of the p-adic logarithm (`log p = 0`).
    pub fn iwasawa_log(&self) -> Result<Self> {
        let (unit, prec) = match &self.repr {
            Repr::Unit { unit, prec, .. } => (unit, *prec),
            _ => return Err(Error::Domain("logarithm of zero".into())),
        };
        let p = self.prime;
        let modulus = prime_power(p, prec);
        // Raise into 1 + pZ_p (1 + 4Z_2 for p = 2); the series then converges.
        let exponent = if p == 2 { 2u32 } else { p - 1 };
        let z = unit.modpow(&BigUint::from(exponent), &modulus);
        let y = if z.is_zero() { modulus.clone() - 1u32 } else { (z + &modulus - 1u32) % &modulus };
        if y.is_zero() {
            let abs = if p == 2 { prec as i64 - 1 } else { prec as i64 };
            return Ok(Self::zero_to(p, abs));
        }
        let w = p_adic_valuation(&y, p) as u64;
        // Terms y^n/n with n*w - v_p(n) >= prec vanish modulo p^prec.
        let ilog = |n: u64| -> u32 {
            let mut k = 0;
            let mut m = n;
            while m >= p as u64 {
                m /= p as u64;
                k += 1;
            }
            k
        };
        let mut n_max = 1u64;
        while n_max * w < prec as u64 + ilog(n_max) as u64 {
            n_max += 1;
        }
        let extra = ilog(n_max);
        let work = prime_power(p, prec + extra);
        let mut sum = BigInt::zero();
        let mut power = BigUint::one();
        for n in 1..n_max {
            power = (power * &y) % &work;
            let vn = {
                let mut k = 0u32;
                let mut m = n;
                while m % p as u64 == 0 {
                    m /= p as u64;
                    k += 1;
                }
                k
            };
            let reduced = (&power / prime_power(p, vn)) % &modulus;
            let cofactor = BigUint::from(n / (p as u64).pow(vn)) % &modulus;
            let inv = cofactor.modinv(&modulus).expect("cofactor prime to p");
            let term = BigInt::from((reduced * inv) % &modulus);
            if n % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let s = mod_floor_big(&sum, &modulus);
        if p == 2 {
            // divide by 2: s has valuation >= 3
            let half = s >> 1u32;
            return Ok(Self::normalize(p, 0, half, prec as i64 - 1));
        }
        let inv = BigUint::from(p - 1).modinv(&modulus).expect("p-1 is a unit");
        Ok(Self::normalize(p, 0, (s * inv) % &modulus, prec as i64))
    }

    /// Integer representative of the unit part in the balanced range, for display of small values.
    pub fn to_rational_hint(&self) -> Option<BigInt> {
        let (val, unit, prec) = match &self.repr {
            Repr::Unit { val, unit, prec } => (*val, unit, *prec),
            _ => return None,
        };
        if val < 0 {
            return None;
        }
        let modulus = prime_power(self.prime, prec);
        let half = &modulus >> 1u32;
        let u = if unit > &half {
            BigInt::from(unit.clone()) - BigInt::from(modulus)
        } else {
            BigInt::from(unit.clone())
        };
        Some(u * BigInt::from(prime_power(self.prime, val as u32)))
    }

    /// Parses `0`, `O(p^k)`, `p^v * u + O(p^m)`, an integer, or a rational `a/b`.
    pub fn parse(text: &str, cfg: &PadicConfig) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |m: &str| Error::parse("<literal>", format!("{m}: {text:?}"));
        if s.is_empty() {
            return Err(err("empty literal"));
        }
        if s == "0" {
            return Ok(Self::exact_zero(cfg.prime));
        }
        let parse_power = |t: &str| -> Result<(u32, i64)> {
            let (b, e) = t.split_once('^').ok_or_else(|| err("expected p^k"))?;
            let b: u32 = b.parse().map_err(|_| err("bad prime"))?;
            let e: i64 = e.parse().map_err(|_| err("bad exponent"))?;
            if b != cfg.prime {
                return Err(err("prime does not match configuration"));
            }
            Ok((b, e))
        };
        if let Some(inner) = s.strip_prefix("O(").and_then(|t| t.strip_suffix(')')) {
            let (_, abs) = parse_power(inner)?;
            return Ok(Self::zero_to(cfg.prime, abs));
        }
        if s.contains("+O(") {
            let (head, tail) = s.split_once("+O(").expect("checked");
            let tail = tail.strip_suffix(')').ok_or_else(|| err("unterminated O(...)"))?;
            let (_, abs) = parse_power(tail)?;
            let (pv, u) = head.split_once('*').ok_or_else(|| err("expected p^v * u"))?;
            let (_, val) = parse_power(pv)?;
            let unit: BigUint = u.parse().map_err(|_| err("bad unit"))?;
            if abs <= val {
                return Err(err("precision must exceed valuation"));
            }
            return Self::from_parts(cfg.prime, val, unit, (abs - val) as u32);
        }
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.to_string(), b.to_string()),
            None => (s.clone(), "1".to_string()),
        };
        let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
        let den: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
        Self::from_rational(&num, &den, cfg.prime, cfg.precision)
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime;
        match &self.repr {
            Repr::ExactZero => write!(f, "0"),
            Repr::Approx0 { abs } => write!(f, "O({p}^{abs})"),
            Repr::Unit { val, unit, prec } => {
                write!(f, "{p}^{val} * {unit} + O({p}^{})", val + *prec as i64)
            }
        }
    }
}

impl PartialEq for PadicNumber {
    /// Equal when the difference vanishes to the available precision.
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.sub_ref(other).is_zero()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                self.$inner(rhs)
            }
        }
        impl $tr<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                (&self).$inner(&rhs)
            }
        }
        impl $tr<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                (&self).$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Div<&PadicNumber> for &PadicNumber {
    type Output = PadicNumber;
    /// Panics on division by zero; use [`PadicNumber::try_div`] for a fallible form.
    fn div(self, rhs: &PadicNumber) -> PadicNumber {
        self.try_div(rhs).expect("division by zero")
    }
}

impl Div<PadicNumber> for PadicNumber {
    type Output = PadicNumber;
    fn div(self, rhs: PadicNumber) -> PadicNumber {
        &self / &rhs
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_ref()
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_ref()
    }
}

/// Valuation of a big integer, used by callers that build literals.
pub fn valuation_of_int(n: &BigInt, p: u32) -> Option<u32> {
    if n.is_zero() {
        None
    } else {
        Some(p_adic_valuation(&n.abs().to_biguint().expect("abs"), p))
    }
}

/// Convenience for tests and callers holding small integers.
pub fn small_unit(x: &PadicNumber) -> Option<u64> {
    x.unit().and_then(|u| u.to_u64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn cfg(p: u32, n: u32) -> PadicConfig {
        PadicConfig::new(p, n).unwrap()
    }

    #[test]
    fn rational_with_positive_valuation() {
        let x = cfg(5, 8).rational(75, 2);
        assert_eq!(x.valuation(), Some(2));
        // 3/2 mod 5^8
        let m = BigUint::from(390625u32);
        let expected = (BigUint::from(3u32) * BigUint::from(2u32).modinv(&m).unwrap()) % &m;
        assert_eq!(x.unit(), Some(&expected));
        assert_eq!(x.relative_precision(), Some(8));
    }

    #[test]
    fn zero_numerator_is_exact_zero() {
        assert!(cfg(5, 8).rational(0, 7).is_exact_zero());
    }

    #[test]
    fn one_third_mod_625() {
        let x = cfg(5, 4).rational(1, 3);
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(small_unit(&x), Some(417));
    }

    #[test]
    fn cancellation_gives_zero_to_precision() {
        let c = cfg(5, 6);
        let x = c.rational(7, 3);
        let d = &x - &x;
        assert!(d.is_zero());
        assert!(!d.is_exact_zero());
        assert_eq!(d.absolute_precision(), Some(6));
    }

    #[test]
    fn sum_precision_is_min_absolute() {
        let c = cfg(5, 6);
        let a = c.int(1); // abs 6
        let b = c.int(25); // abs 8
        let s = &a + &b;
        assert_eq!(s.absolute_precision(), Some(6));
        let t = &c.int(5) + &c.int(-5 + 125);
        assert_eq!(t.valuation(), Some(3));
        assert_eq!(t.absolute_precision(), Some(7));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let c = cfg(5, 8);
        let x = c.rational(75, 2);
        let text = x.to_string();
        assert!(text.starts_with("5^2 * "));
        assert!(text.ends_with("+ O(5^10)"));
        assert_eq!(c.parse(&text).unwrap(), x);
        assert_eq!(c.parse("0").unwrap().to_string(), "0");
        assert_eq!(c.parse("O(5^3)").unwrap().to_string(), "O(5^3)");
        assert_eq!(c.parse("-3/10").unwrap(), c.rational(-3, 10));
        assert!(c.parse("7^1 * 3 + O(7^4)").is_err());
        assert!(c.parse("1/0").is_err());
    }

    #[test]
    fn log_of_p_vanishes() {
        let c = cfg(5, 10);
        assert!(c.int(5).iwasawa_log().unwrap().is_zero());
        assert!(c.int(-1).iwasawa_log().unwrap().is_zero());
    }

    #[test]
    fn log_of_zero_is_domain_error() {
        assert!(matches!(
            PadicNumber::exact_zero(5).iwasawa_log(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn log_is_additive_on_square() {
        let c = cfg(5, 12);
        let x = c.int(6);
        let lx = x.iwasawa_log().unwrap();
        let lxx = (&x * &x).iwasawa_log().unwrap();
        assert_eq!(lxx, &lx + &lx);
    }

    /// Oracle: sum the series for log(1+5) over Q with exact rationals and
    /// reduce the partial sum modulo 5^6.
    #[test]
    fn log_one_plus_p_matches_series_oracle() {
        let p = 5u32;
        let n = 6u32;
        let mut sum = BigRational::zero();
        let five = BigRational::from_integer(BigInt::from(5));
        let mut pow = BigRational::one();
        for k in 1..=40i64 {
            pow = &pow * &five;
            let term = &pow / BigRational::from_integer(BigInt::from(k));
            if k % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let expected = PadicNumber::from_rational(sum.numer(), sum.denom(), p, 40).unwrap();
        let got = cfg(p, n).int(6).iwasawa_log().unwrap();
        assert_eq!(got.valuation(), Some(1));
        assert_eq!(got.absolute_precision(), Some(6));
        assert_eq!(got, expected);
    }

    #[test]
    fn log_for_p_two() {
        let c = cfg(2, 16);
        let x = c.int(5);
        let y = c.int(-3);
        let lhs = (&x * &y).iwasawa_log().unwrap();
        let rhs = &x.iwasawa_log().unwrap() + &y.iwasawa_log().unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn teichmuller_examples() {
        let c = cfg(5, 6);
        assert_eq!(c.int(6).teichmuller().unwrap(), c.int(1));
        // Oracle: iterate t -> t^5 from 2 until stable modulo 5^6.
        let m = BigUint::from(15625u32);
        let mut t = BigUint::from(2u32);
        loop {
            let next = t.modpow(&BigUint::from(5u32), &m);
            if next == t {
                break;
            }
            t = next;
        }
        let w = c.int(2).teichmuller().unwrap();
        assert_eq!(w.unit(), Some(&t));
        assert_eq!(w.pow(4).unwrap(), c.int(1));
        let c3 = cfg(3, 7);
        assert_eq!(c3.int(2).teichmuller().unwrap(), c3.int(-1));
        assert!(c.int(10).teichmuller().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(PadicConfig::new(4, 10).is_err());
        assert!(PadicConfig::new(5, 3).is_err());
        assert!(PadicConfig::new(5, 10).unwrap().with_slack(10).is_err());
    }
}
