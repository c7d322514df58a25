//! Fixed-point midpoint–radius arithmetic on big integers.
//!
//! A [`Ball`] with precision `p` stands for every real in
//! `[(mid - rad) / 2^p, (mid + rad) / 2^p]`. All operations return balls
//! containing the exact result for every choice of inputs in the operand balls.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

fn round_shift(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (bits - 1);
    (x + half) >> bits
}

fn ceil_shift(x: &BigInt, bits: u32) -> BigInt {
    // x >= 0
    let q: BigInt = x >> bits;
    if (&q << bits) == *x {
        q
    } else {
        q + 1
    }
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer to a/b
    let (q, r) = a.div_mod_floor(b);
    let twice = r.abs() * 2;
    if twice >= b.abs() {
        if b.is_positive() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn ceil_div_pos(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

impl Ball {
    pub fn zero(prec: u32) -> Ball {
        Ball {
            mid: BigInt::zero(),
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_int(k: i64, prec: u32) -> Ball {
        Ball {
            mid: BigInt::from(k) << prec,
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_ratio(r: &Ratio<i64>, prec: u32) -> Ball {
        let num = BigInt::from(*r.numer()) << prec;
        let den = BigInt::from(*r.denom());
        let (q, rem) = num.div_rem(&den);
        if rem.is_zero() {
            Ball {
                mid: q,
                rad: BigInt::zero(),
                prec,
            }
        } else {
            Ball {
                mid: q,
                rad: BigInt::one(),
                prec,
            }
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_exact_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    /// `Some(sign)` when the whole ball lies strictly on one side of zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.mid.abs() > self.rad {
            Some(if self.mid.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            })
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.sign().is_none()
    }

    /// Radius in units of `2^-prec`.
    pub fn radius_units(&self) -> &BigInt {
        &self.rad
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mid.to_string().parse::<f64>().unwrap_or(f64::NAN);
        m / 2f64.powi(self.prec as i32)
    }

    pub fn add(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        Ball {
            mid: &self.mid + &o.mid,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        Ball {
            mid: &self.mid - &o.mid,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        if self.is_exact_zero() || o.is_exact_zero() {
            return Ball::zero(self.prec);
        }
        let p = self.prec;
        let mid = round_shift(&(&self.mid * &o.mid), p);
        let err = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let exact = self.rad.is_zero() && o.rad.is_zero() && {
            let prod = &self.mid * &o.mid;
            (&mid << p) == prod
        };
        let rad = if exact {
            BigInt::zero()
        } else {
            ceil_shift(&err, p) + 1
        };
        Ball { mid, rad, prec: p }
    }

    pub fn mul_int(&self, k: i64) -> Ball {
        let k = BigInt::from(k);
        Ball {
            mid: &self.mid * &k,
            rad: &self.rad * k.abs(),
            prec: self.prec,
        }
    }

    pub fn div_int(&self, k: i64) -> Ball {
        assert!(k != 0);
        let k = BigInt::from(k);
        let mid = round_div(&self.mid, &k);
        let rad = ceil_div_pos(&self.rad, &k.abs()) + 1;
        Ball {
            mid,
            rad,
            prec: self.prec,
        }
    }

    /// `None` when the divisor ball contains zero.
    pub fn div(&self, o: &Ball) -> Option<Ball> {
        debug_assert_eq!(self.prec, o.prec);
        let b = o.mid.abs();
        if b <= o.rad {
            return None;
        }
        if self.is_exact_zero() {
            return Some(Ball::zero(self.prec));
        }
        let p = self.prec;
        let mid = round_div(&(&self.mid << p), &o.mid);
        // |x/y - a/b| <= (r|b| + s|a|) / (|b| (|b| - s))
        let num = (&self.rad * &b + &o.rad * self.mid.abs()) << p;
        let den = &b * (&b - &o.rad);
        let rad = ceil_div_pos(&num, &den) + 1;
        Some(Ball { mid, rad, prec: p })
    }

    /// Widens the radius by `units` of `2^-prec`.
    pub fn inflate(&self, units: &BigInt) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: &self.rad + units,
            prec: self.prec,
        }
    }

    /// Upper bound of `|x|` in units.
    fn abs_upper(&self) -> BigInt {
        self.mid.abs() + &self.rad
    }
}

/// `atan(1/x)` for an integer `x >= 2`, by its alternating series.
fn atan_inv(x: u64, prec: u32) -> Ball {
    let one = BigInt::one() << prec;
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = &one / &x; // floor(2^p / x^(2k+1))
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    let mut terms = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        power /= &x2;
        k += 1;
        terms += 1;
    }
    // each term is off by < 3 units after the two floors; the dropped tail is < 1 unit
    Ball {
        mid: sum,
        rad: BigInt::from(3 * terms + 2),
        prec,
    }
}

/// π as a ball of the requested precision.
pub fn pi(prec: u32) -> Ball {
    let guard = 16;
    let p = prec + guard;
    let a = atan_inv(5, p).mul_int(16);
    let b = atan_inv(239, p).mul_int(4);
    let v = a.sub(&b);
    Ball {
        mid: round_shift(&v.mid, guard),
        rad: ceil_shift(&v.rad, guard) + 1,
        prec,
    }
}

/// `(cos 2πθ, sin 2πθ)` for a rational angle fraction `θ`.
pub fn unit_circle(theta: &Ratio<i64>, prec: u32) -> (Ball, Ball) {
    // reduce to φ ∈ [-1/2, 1/2]
    let whole = (theta + Ratio::new(1, 2)).floor();
    let phi = theta - whole;
    let guard = 24;
    let p = prec + guard;
    let x = pi(p).mul_int(2).mul(&Ball::from_ratio(&phi, p));
    let (c, s) = cos_sin(&x);
    let shrink = |b: Ball| Ball {
        mid: round_shift(&b.mid, guard),
        rad: ceil_shift(&b.rad, guard) + 1,
        prec,
    };
    (shrink(c), shrink(s))
}

/// Taylor series for `|x| <= 4`.
fn cos_sin(x: &Ball) -> (Ball, Ball) {
    let p = x.prec;
    let mut cos = Ball::from_int(1, p);
    let mut sin = x.clone();
    let mut term = x.clone(); // x^k / k!
    let mut k: i64 = 1;
    let small = BigInt::from(8);
    loop {
        k += 1;
        term = term.mul(x).div_int(k);
        match k % 4 {
            0 => cos = cos.add(&term),
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            _ => sin = sin.sub(&term),
        }
        if (k > 12 && term.abs_upper() <= small) || k > 100_000 {
            break;
        }
    }
    // remaining terms shrink by ≥ 2x each once k > 2|x|
    let tail = term.abs_upper() * 2 + 1;
    (cos.inflate(&tail), sin.inflate(&tail))
}

/// Complex ball as a pair of real balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn zero(prec: u32) -> Self {
        ComplexBall {
            re: Ball::zero(prec),
            im: Ball::zero(prec),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_exact_zero() && self.im.is_exact_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexBall {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexBall {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_exact_zero() || o.is_exact_zero() {
            return ComplexBall::zero(self.re.prec());
        }
        ComplexBall {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        ComplexBall {
            re: self.re.mul_int(k),
            im: self.im.mul_int(k),
        }
    }

    pub fn div_real(&self, d: &Ball) -> Option<Self> {
        Some(ComplexBall {
            re: self.re.div(d)?,
            im: self.im.div(d)?,
        })
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self) -> Ball {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
}
