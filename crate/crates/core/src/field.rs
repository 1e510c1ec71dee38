//! Finite fields GF(2^(2^j)) built as a tower of quadratic Artin-Schreier steps.
//!
//! Level 0 is GF(2). Level j+1 is level j adjoined with a root `w_{j+1}` of
//! `y^2 + y + theta_{j+1}`, where `theta_{j+1}` is the smallest element of level j
//! (by bit pattern) of absolute trace 1. An element of level j+1 is stored as
//! `a + b*w_{j+1}` with `a` in the low half of the bits and `b` in the high half,
//! so embedding a lower level into a higher one never moves a bit.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Highest supported tower level: GF(2^64).
pub const MAX_LEVEL: u8 = 6;

/// An element of the tower, stored as its bit vector in the tower basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(u64);

struct Tables {
    theta: [u64; 7],
    sqrt_gen: [u64; 7],
    mul8: Vec<u8>,
    inv8: [u8; 256],
    sqrt8: [u8; 256],
}

fn half_bits(level: u8) -> u32 {
    1u32 << (level - 1)
}

fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn mul_rec(theta: &[u64; 7], a: u64, b: u64, level: u8) -> u64 {
    if level == 0 {
        return a & b & 1;
    }
    let h = half_bits(level);
    let m = mask(h);
    let (a0, a1, b0, b1) = (a & m, a >> h, b & m, b >> h);
    let p0 = mul_rec(theta, a0, b0, level - 1);
    let p1 = mul_rec(theta, a1, b1, level - 1);
    let p2 = mul_rec(theta, a0 ^ a1, b0 ^ b1, level - 1);
    let lo = p0 ^ mul_rec(theta, p1, theta[level as usize], level - 1);
    let hi = p2 ^ p0;
    lo | (hi << h)
}

#[cfg(test)]
fn trace_rec(theta: &[u64; 7], x: u64, level: u8) -> u64 {
    let mut acc = 0;
    let mut p = x;
    for _ in 0..(1u32 << level) {
        acc ^= p;
        p = mul_rec(theta, p, p, level);
    }
    acc
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut theta = [0u64; 7];
        theta[1] = 1;
        // Tr(a + b*w) = Tr(b) one level down, so the smallest trace-one element of
        // level j-1 is theta_{j-1} * w_{j-1}.
        for j in 2..=MAX_LEVEL {
            theta[j as usize] = theta[j as usize - 1] << half_bits(j - 1);
        }
        let mut sqrt_gen = [0u64; 7];
        for j in 1..=MAX_LEVEL {
            // sqrt(x) = x^(2^(m-1)) in GF(2^m)
            let mut p = 1u64 << half_bits(j);
            for _ in 0..((1u32 << j) - 1) {
                p = mul_rec(&theta, p, p, j);
            }
            sqrt_gen[j as usize] = p;
        }
        let mut mul8 = vec![0u8; 256 * 256];
        for a in 0..256u64 {
            for b in 0..256u64 {
                mul8[(a as usize) << 8 | b as usize] = mul_rec(&theta, a, b, 3) as u8;
            }
        }
        let mut inv8 = [0u8; 256];
        let mut sqrt8 = [0u8; 256];
        for a in 1..256usize {
            for b in 1..256usize {
                if mul8[a << 8 | b] == 1 {
                    inv8[a] = b as u8;
                }
            }
            sqrt8[mul8[a << 8 | a] as usize] = a as u8;
        }
        Tables {
            theta,
            sqrt_gen,
            mul8,
            inv8,
            sqrt8,
        }
    })
}

fn level_of(x: u64) -> u8 {
    let mut l = 0u8;
    while l < MAX_LEVEL && (x >> (1u32 << l)) != 0 {
        l += 1;
    }
    l
}

fn mul_at(t: &Tables, a: u64, b: u64, level: u8) -> u64 {
    if level <= 3 {
        return t.mul8[(a as usize) << 8 | b as usize] as u64;
    }
    let h = half_bits(level);
    let m = mask(h);
    let (a0, a1, b0, b1) = (a & m, a >> h, b & m, b >> h);
    let p0 = mul_at(t, a0, b0, level - 1);
    let p1 = mul_at(t, a1, b1, level - 1);
    let p2 = mul_at(t, a0 ^ a1, b0 ^ b1, level - 1);
    let lo = p0 ^ mul_at(t, p1, t.theta[level as usize], level - 1);
    lo | ((p2 ^ p0) << h)
}

fn square_at(t: &Tables, a: u64, level: u8) -> u64 {
    if level <= 3 {
        return t.mul8[(a as usize) << 8 | a as usize] as u64;
    }
    let h = half_bits(level);
    let (a0, a1) = (a & mask(h), a >> h);
    let s0 = square_at(t, a0, level - 1);
    let s1 = square_at(t, a1, level - 1);
    (s0 ^ mul_at(t, s1, t.theta[level as usize], level - 1)) | (s1 << h)
}

fn sqrt_at(t: &Tables, a: u64, level: u8) -> u64 {
    if level <= 3 {
        return t.sqrt8[a as usize] as u64;
    }
    let h = half_bits(level);
    let (a0, a1) = (a & mask(h), a >> h);
    let r0 = sqrt_at(t, a0, level - 1);
    let r1 = sqrt_at(t, a1, level - 1);
    r0 ^ mul_at(t, r1, t.sqrt_gen[level as usize], level)
}

fn inv_at(t: &Tables, a: u64, level: u8) -> u64 {
    if level <= 3 {
        return t.inv8[a as usize] as u64;
    }
    let h = half_bits(level);
    let (a0, a1) = (a & mask(h), a >> h);
    let below = level - 1;
    // (a0 + a1 y)(a0 + a1 + a1 y) = a0^2 + a0 a1 + a1^2 theta
    let norm = square_at(t, a0, below)
        ^ mul_at(t, a0, a1, below)
        ^ mul_at(t, square_at(t, a1, below), t.theta[level as usize], below);
    let ni = inv_at(t, norm, below);
    mul_at(t, a0 ^ a1, ni, below) | (mul_at(t, a1, ni, below) << h)
}

/// Solves x^2 + x = c inside the given level, returning the root with bit 0 clear.
fn solve_as(t: &Tables, c: u64, level: u8) -> Option<u64> {
    if level == 0 {
        return (c == 0).then_some(0);
    }
    let h = half_bits(level);
    let (c0, c1) = (c & mask(h), c >> h);
    let below = level - 1;
    let b0 = solve_as(t, c1, below)?;
    for b in [b0, b0 ^ 1] {
        let rhs = c0 ^ mul_at(t, square_at(t, b, below), t.theta[level as usize], below);
        if let Some(a) = solve_as(t, rhs, below) {
            let x = a | (b << h);
            return Some(x.min(x ^ 1));
        }
    }
    None
}

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub const fn from_bits(bits: u64) -> Self {
        FieldElem(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The generator `w_level` adjoined at the given level (level >= 1).
    pub fn generator(level: u8) -> Result<Self> {
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::InvalidInput(format!("no generator w{level}")));
        }
        Ok(FieldElem(1u64 << half_bits(level)))
    }

    /// Smallest tower level containing this element.
    pub fn level(self) -> u8 {
        level_of(self.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn add(self, other: Self) -> Self {
        FieldElem(self.0 ^ other.0)
    }

    pub fn mul(self, other: Self) -> Self {
        let level = self.level().max(other.level());
        FieldElem(mul_at(tables(), self.0, other.0, level))
    }

    pub fn square(self) -> Self {
        FieldElem(square_at(tables(), self.0, self.level()))
    }

    pub fn sqrt(self) -> Self {
        FieldElem(sqrt_at(tables(), self.0, self.level()))
    }

    /// Unique 2^k-th root.
    pub fn root_2k(self, k: u32) -> Self {
        let level = self.level();
        let m = 1u32 << level;
        let mut x = self;
        for _ in 0..(k % m) {
            x = x.sqrt();
        }
        x
    }

    pub fn inv(self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem(inv_at(tables(), self.0, self.level())))
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to GF(2), computed in the given level.
    pub fn trace(self, level: u8) -> Result<FieldElem> {
        if level < self.level() {
            return Err(Error::InvalidInput(format!(
                "element {self} is not in level {level}"
            )));
        }
        let t = tables();
        let mut acc = 0;
        let mut p = self.0;
        for _ in 0..(1u32 << level) {
            acc ^= p;
            p = square_at(t, p, level);
        }
        Ok(FieldElem(acc))
    }

    /// Artin-Schreier root at the lowest level that has one, without touching a context.
    pub fn as_root(self) -> Result<(FieldElem, u8)> {
        let t = tables();
        let start = self.level();
        for level in start..=MAX_LEVEL {
            if let Some(x) = solve_as(t, self.0, level) {
                return Ok((FieldElem(x), level));
            }
        }
        Err(Error::TowerExhausted(1 << MAX_LEVEL))
    }
}

/// The constant `theta_j` defining level j over level j-1.
pub fn level_constant(level: u8) -> FieldElem {
    FieldElem(tables().theta[level as usize])
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("0");
        }
        let mut first = true;
        for k in (0..64u32).rev() {
            if self.0 >> k & 1 == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if k == 0 {
                f.write_str("1")?;
                continue;
            }
            let mut mono = true;
            for i in 0..6u32 {
                if k >> i & 1 == 1 {
                    if !mono {
                        f.write_str("*")?;
                    }
                    mono = false;
                    write!(f, "w{}", i + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({self})")
    }
}

/// One level of a context's tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub index: u8,
    pub degree: u32,
    pub constant: FieldElem,
}

impl Level {
    /// Defining polynomial of this level over the previous one.
    pub fn modulus(&self) -> String {
        if self.index == 0 {
            return "x".into();
        }
        let c = self.constant;
        let cs = if c.bits().count_ones() > 1 {
            format!("({c})")
        } else {
            c.to_string()
        };
        format!("w{0}^2+w{0}+{cs}", self.index)
    }
}

/// Records how far up the tower a computation has reached.
///
/// Arithmetic itself never needs the context; it only tracks which levels have been
/// adjoined so reports can state the coefficient field actually used.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FieldCtx {
    top: u8,
}

impl FieldCtx {
    pub fn new() -> Self {
        FieldCtx { top: 0 }
    }

    pub fn with_level(level: u8) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::TowerExhausted(1 << MAX_LEVEL));
        }
        Ok(FieldCtx { top: level })
    }

    pub fn top_level(&self) -> u8 {
        self.top
    }

    /// Degree of the top level over GF(2).
    pub fn degree(&self) -> u32 {
        1 << self.top
    }

    pub fn levels(&self) -> Vec<Level> {
        (0..=self.top)
            .map(|index| Level {
                index,
                degree: 1 << index,
                constant: if index == 0 {
                    FieldElem::ZERO
                } else {
                    level_constant(index)
                },
            })
            .collect()
    }

    /// Makes sure `x` is representable; returns true if the tower grew.
    pub fn absorb(&mut self, x: FieldElem) -> bool {
        let l = x.level();
        if l > self.top {
            self.top = l;
            true
        } else {
            false
        }
    }

    /// Returns x with x^2 + x = c, extending the recorded tower if needed.
    pub fn as_root_const(&mut self, c: FieldElem) -> Result<FieldElem> {
        let (x, _) = c.as_root()?;
        self.absorb(c);
        self.absorb(x);
        Ok(x)
    }

    /// Human-readable name such as `GF(16)`.
    pub fn name(&self) -> String {
        if self.top <= 4 {
            format!("GF({})", 1u64 << (1u32 << self.top))
        } else {
            format!("GF(2^{})", 1u32 << self.top)
        }
    }
}
