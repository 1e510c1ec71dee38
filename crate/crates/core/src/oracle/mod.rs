//! Brute-force ramification data computed inside an explicit tower.
//!
//! The tower is built as an exact algebra over k((t)); automorphisms are found by
//! searching for generator shifts that preserve every defining relation, valuations
//! come from norms down to k((t)), and the lower filtration is read off from
//! `i(sigma) = v_L(sigma(z) - z)` for a uniformizer `z` of the top field.
//! Nothing here uses the closed-form break formulas.

mod tower;

pub use tower::{TowerAlgebra, TowerElem};

use std::fmt;

use serde::Serialize;

use crate::breaks::BreakSequence;
use crate::d4::ASTriple;
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::series::{Series, INFINITE_VALUATION};

/// Images of the generators: `g_i -> g_i + shift_i` with `shift_i` in level i-1.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    shifts: Vec<TowerElem>,
}

impl Automorphism {
    pub fn identity(height: usize) -> Self {
        Automorphism {
            shifts: (0..height).map(TowerElem::zero).collect(),
        }
    }

    pub fn shift(&self, i: usize) -> &TowerElem {
        &self.shifts[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.shifts.iter().all(|s| s.is_zero())
    }
}

/// Abstract shape of a small 2-group, identified from element orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupShape {
    Trivial,
    Cyclic2,
    KleinFour,
    Cyclic4,
    Dihedral8,
    Other,
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Lower ramification data of a tower.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Filtration {
    /// `i(sigma)` for each non-identity automorphism, with a readable description.
    pub numbers: Vec<(String, i64)>,
    pub lower: BreakSequence,
    pub different: i64,
}

/// A totally ramified tower with its automorphisms and a uniformizer at every level.
#[derive(Clone, Debug)]
pub struct RamifiedTower {
    algebra: TowerAlgebra,
    names: Vec<char>,
    /// `autos[i]`: automorphisms of level i over K.
    autos: Vec<Vec<Automorphism>>,
    /// `uniformizers[i]`: uniformizer of level i (index 0 is t).
    uniformizers: Vec<TowerElem>,
    /// Break of level i over level i-1.
    step_breaks: Vec<i64>,
    precision: i64,
}

fn render(x: &TowerElem, names: &[char]) -> String {
    let mut parts = Vec::new();
    for (idx, c) in x.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono: String = (0..names.len())
            .filter(|b| idx >> b & 1 == 1)
            .map(|b| names[b])
            .collect();
        let cs = c.to_string();
        parts.push(match (mono.is_empty(), cs.as_str()) {
            (true, _) => cs.clone(),
            (false, "1") => mono,
            (false, _) if cs.contains(' ') => format!("({cs})*{mono}"),
            (false, _) => format!("{cs}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn leading_coefficient(s: &Series) -> Result<FieldElem> {
    Ok(s.leading()?.1)
}

impl RamifiedTower {
    /// Builds the tower `g_i^2 + g_i = relations[i-1]`.
    pub fn new(relations: Vec<TowerElem>, names: Vec<char>, precision: i64) -> Result<Self> {
        assert_eq!(relations.len(), names.len());
        let height = relations.len();
        let mut tower = RamifiedTower {
            algebra: TowerAlgebra::new(relations),
            names,
            autos: vec![vec![Automorphism::identity(0)]],
            uniformizers: vec![TowerElem::from_base(Series::monomial(FieldElem::ONE, 1))],
            step_breaks: Vec::new(),
            precision,
        };
        for level in 1..=height {
            tower.extend_automorphisms(level)?;
            tower.extend_uniformizer(level)?;
        }
        Ok(tower)
    }

    pub fn height(&self) -> usize {
        self.algebra.height()
    }

    pub fn degree(&self) -> usize {
        1 << self.height()
    }

    pub fn algebra(&self) -> &TowerAlgebra {
        &self.algebra
    }

    pub fn generator(&self, i: usize) -> TowerElem {
        self.algebra.generator(i)
    }

    pub fn automorphisms(&self) -> &[Automorphism] {
        &self.autos[self.height()]
    }

    pub fn uniformizer(&self) -> &TowerElem {
        &self.uniformizers[self.height()]
    }

    /// Uniformizer of an intermediate level.
    pub fn uniformizer_at(&self, level: usize) -> &TowerElem {
        &self.uniformizers[level]
    }

    /// Conductor of each step over the previous one.
    pub fn step_breaks(&self) -> &[i64] {
        &self.step_breaks
    }

    pub fn describe(&self, sigma: &Automorphism) -> String {
        let parts: Vec<String> = (1..=sigma.shifts.len())
            .map(|i| {
                let n = self.names[i - 1];
                let s = sigma.shift(i);
                if s.is_zero() {
                    format!("{n}->{n}")
                } else {
                    format!("{n}->{n}+{}", render(s, &self.names))
                }
            })
            .collect();
        parts.join(", ")
    }

    pub fn render(&self, x: &TowerElem) -> String {
        render(x, &self.names)
    }

    /// Applies an automorphism (of any level at least x's level).
    pub fn apply(&self, sigma: &Automorphism, x: &TowerElem) -> TowerElem {
        let level = x.level();
        if level == 0 {
            return x.clone();
        }
        let half = x.coords().len() / 2;
        let lo = TowerElem::from_coords(x.coords()[..half].to_vec());
        let hi = TowerElem::from_coords(x.coords()[half..].to_vec());
        let image = self.algebra.generator(level).add(sigma.shift(level));
        self.apply(sigma, &lo)
            .add(&self.algebra.mul(&self.apply(sigma, &hi), &image))
    }

    /// `sigma` after `tau`.
    pub fn compose(&self, sigma: &Automorphism, tau: &Automorphism) -> Automorphism {
        Automorphism {
            shifts: (1..=tau.shifts.len())
                .map(|i| sigma.shift(i).add(&self.apply(sigma, tau.shift(i))).embed(i - 1))
                .collect(),
        }
    }

    fn extend_automorphisms(&mut self, level: usize) -> Result<()> {
        let a = self.algebra.relation(level).clone();
        let below = level - 1;
        let mut found = Vec::new();
        for sigma in &self.autos[below] {
            let target = self.apply(sigma, &a).add(&a);
            let n = 1usize << below;
            for mask in 0u32..(1u32 << n) {
                let delta = TowerElem::from_coords(
                    (0..n)
                        .map(|j| {
                            if mask >> j & 1 == 1 {
                                Series::one()
                            } else {
                                Series::zero()
                            }
                        })
                        .collect(),
                );
                if self.algebra.wp(&delta) == target {
                    let mut shifts = sigma.shifts.clone();
                    shifts.push(delta);
                    found.push(Automorphism { shifts });
                }
            }
        }
        if found.len() != 1 << level {
            return Err(Error::GroupTableMismatch(format!(
                "level {level} has {} automorphisms over K, expected {}",
                found.len(),
                1 << level
            )));
        }
        self.autos.push(found);
        Ok(())
    }

    /// Norm of an element of the given level down to K.
    pub fn norm_at(&self, level: usize, x: &TowerElem) -> Result<Series> {
        let x = x.embed(level);
        let mut acc = TowerElem::one(level);
        for sigma in &self.autos[level] {
            acc = self.algebra.mul(&acc, &self.apply(sigma, &x));
        }
        acc.base_part().cloned().ok_or_else(|| {
            Error::GroupTableMismatch("norm does not lie in the base field".into())
        })
    }

    /// Normalized valuation in the given level.
    pub fn valuation_at(&self, level: usize, x: &TowerElem) -> Result<i64> {
        if x.is_zero() {
            return Ok(INFINITE_VALUATION);
        }
        self.norm_at(level, x)?.valuation()
    }

    /// Normalized valuation of the top field, computed as `v_K(N(x))`.
    pub fn norm_valuation(&self, x: &TowerElem) -> Result<i64> {
        self.valuation_at(self.height(), x)
    }

    fn size_guard(&self, x: &TowerElem) -> Result<()> {
        if x.size() as i64 > 64 * self.precision.max(1) {
            return Err(Error::precision(format!(
                "tower element outgrew the size budget for precision {}",
                self.precision
            )));
        }
        Ok(())
    }

    /// Reduces the relation of `level` to odd negative valuation and builds its uniformizer.
    fn extend_uniformizer(&mut self, level: usize) -> Result<()> {
        let below = level - 1;
        let degree_below = 1i64 << below;
        let z_below = self.uniformizers[below].clone();
        let mut a = self.algebra.relation(level).clone();
        let mut shift = TowerElem::zero(below);
        let m = loop {
            let v = self.valuation_at(below, &a)?;
            if v == INFINITE_VALUATION || v >= 0 {
                return Err(Error::NotTotallyRamified(format!(
                    "generator {} has relation of valuation {} after reduction",
                    self.names[level - 1],
                    if v == INFINITE_VALUATION { "infinity".to_string() } else { v.to_string() }
                )));
            }
            if v % 2 != 0 {
                break -v;
            }
            let k = -v / 2;
            let a_pow = (k + degree_below - 1) / degree_below;
            let b_pow = a_pow * degree_below - k;
            let p = self
                .algebra
                .pow(&z_below, b_pow as u64)
                .scale(&Series::monomial(FieldElem::ONE, -a_pow));
            let p2 = self.algebra.square(&p);
            let ratio = leading_coefficient(&self.norm_at(below, &a)?)?
                .mul(leading_coefficient(&self.norm_at(below, &p2)?)?.inv()?);
            let c = ratio.root_2k(level as u32);
            let y = p.scale(&Series::constant(c));
            a = a.add(&self.algebra.wp(&y));
            shift = shift.add(&y);
            self.size_guard(&a)?;
        };
        let reduced = self.algebra.generator(level).add(&shift);
        let z = self
            .algebra
            .mul(&reduced, &self.algebra.pow(&z_below, ((m + 1) / 2) as u64));
        self.size_guard(&z)?;
        self.uniformizers.push(z);
        self.step_breaks.push(m);
        let v = self.valuation_at(level, &self.uniformizers[level])?;
        if v != 1 {
            return Err(Error::GroupTableMismatch(format!(
                "constructed uniformizer of level {level} has valuation {v}"
            )));
        }
        Ok(())
    }

    pub fn order_of(&self, sigma: &Automorphism) -> usize {
        let mut p = sigma.clone();
        let mut n = 1;
        while !p.is_identity() {
            p = self.compose(sigma, &p);
            n += 1;
        }
        n
    }

    /// Identifies the automorphism group, checking the dihedral presentation when it applies.
    pub fn group_shape(&self) -> Result<GroupShape> {
        let g = self.automorphisms();
        let orders: Vec<usize> = g.iter().map(|s| self.order_of(s)).collect();
        let count = |k: usize| orders.iter().filter(|&&o| o == k).count();
        Ok(match (g.len(), count(2), count(4)) {
            (1, _, _) => GroupShape::Trivial,
            (2, 1, _) => GroupShape::Cyclic2,
            (4, 3, 0) => GroupShape::KleinFour,
            (4, 1, 2) => GroupShape::Cyclic4,
            (8, 5, 2) => {
                self.check_dihedral()?;
                GroupShape::Dihedral8
            }
            _ => GroupShape::Other,
        })
    }

    /// Finds a of order 4 and b of order 2 outside <a> with b a b^-1 = a^3.
    fn check_dihedral(&self) -> Result<()> {
        let g = self.automorphisms();
        let id = Automorphism::identity(self.height());
        for a in g.iter().filter(|s| self.order_of(s) == 4) {
            let a2 = self.compose(a, a);
            let a3 = self.compose(a, &a2);
            let cyclic = [&id, a, &a2, &a3];
            for b in g.iter().filter(|s| self.order_of(s) == 2) {
                if cyclic.contains(&b) {
                    continue;
                }
                // b is an involution, so b^-1 = b
                let conj = self.compose(b, &self.compose(a, b));
                if conj == a3 {
                    return Ok(());
                }
            }
        }
        Err(Error::GroupTableMismatch(
            "no generators satisfying the dihedral presentation".into(),
        ))
    }

    /// `i(sigma) = v_L(sigma(z) - z)` for every non-identity automorphism.
    pub fn ramification_numbers(&self) -> Result<Vec<(Automorphism, i64)>> {
        let z = self.uniformizer();
        let mut out = Vec::new();
        for sigma in self.automorphisms().iter().filter(|s| !s.is_identity()) {
            let i = self.norm_valuation(&self.apply(sigma, z).add(z))?;
            if i > self.precision {
                return Err(Error::precision(format!(
                    "ramification number {i} exceeds the precision budget {}",
                    self.precision
                )));
            }
            out.push((sigma.clone(), i));
        }
        Ok(out)
    }

    /// Lower breaks and the degree of the different.
    pub fn filtration(&self) -> Result<Filtration> {
        let numbers = self.ramification_numbers()?;
        let mut values: Vec<i64> = numbers.iter().map(|(_, i)| *i).collect();
        values.sort_unstable_by(|a, b| b.cmp(a));
        let n = self.height();
        let lower: Vec<i64> = (1..=n)
            .map(|k| values[(1usize << (n + 1 - k)) - 2] - 1)
            .collect();
        Ok(Filtration {
            numbers: numbers
                .iter()
                .map(|(s, i)| (self.describe(s), *i))
                .collect(),
            lower: BreakSequence::lower(&lower)?,
            different: values.iter().sum(),
        })
    }

    /// Automorphism with the given generator shifts by constants 0/1.
    pub fn find(&self, flips: &[(usize, TowerElem)]) -> Option<&Automorphism> {
        self.automorphisms().iter().find(|s| {
            (1..=self.height()).all(|i| {
                let want = flips
                    .iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, e)| e.embed(i - 1))
                    .unwrap_or_else(|| TowerElem::zero(i - 1));
                s.shift(i) == &want
            })
        })
    }

    /// Conductor of the quotient by the subgroup `h`: `(1/|h|) * sum over a coset of i - 1`.
    pub fn quotient_break(&self, coset: &[&Automorphism]) -> Result<i64> {
        let z = self.uniformizer();
        let mut total = 0;
        for sigma in coset {
            total += self.norm_valuation(&self.apply(sigma, z).add(z))?;
        }
        let n = coset.len() as i64;
        if total % n != 0 {
            return Err(Error::NonIntegralResult(format!(
                "quotient ramification number {total}/{n}"
            )));
        }
        Ok(total / n - 1)
    }
}

fn base(s: &Series) -> TowerElem {
    TowerElem::from_base(s.clone())
}

/// The degree-8 tower q^2+q = F, s^2+s = G, r^2+r = Gq+H.
pub fn build_tower(t: &ASTriple, precision: i64) -> Result<RamifiedTower> {
    t.check_d4()?;
    let top = TowerElem::from_coords(vec![
        t.top.clone(),
        t.second.clone(),
        Series::zero(),
        Series::zero(),
    ]);
    RamifiedTower::new(
        vec![base(&t.first), base(&t.second), top],
        vec!['q', 's', 'r'],
        precision,
    )
}

/// The degree-2 extension x^2 + x = F.
pub fn quadratic_tower(f: &Series, precision: i64) -> Result<RamifiedTower> {
    RamifiedTower::new(vec![base(f)], vec!['q'], precision)
}

/// The compositum of x^2 + x = F1 and y^2 + y = F2.
pub fn biquadratic_tower(f1: &Series, f2: &Series, precision: i64) -> Result<RamifiedTower> {
    RamifiedTower::new(vec![base(f1), base(f2)], vec!['q', 's'], precision)
}

/// Relative conductors in a biquadratic tower K[q, s].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeConductors {
    /// Conductor of K[q, s] over K[q].
    pub over_first: i64,
    /// Conductor of K[q, s] over K[s].
    pub over_second: i64,
    /// Conductor of K[q + s] over K.
    pub third: i64,
}

pub fn relative_conductors(tower: &RamifiedTower) -> Result<RelativeConductors> {
    if tower.height() != 2 {
        return Err(Error::InvalidInput("need a two-step tower".into()));
    }
    let one = TowerElem::one(0);
    let flip_q = tower.find(&[(1, one.clone())]).cloned();
    let flip_s = tower.find(&[(2, one.clone())]).cloned();
    let (Some(fq), Some(fs)) = (flip_q, flip_s) else {
        return Err(Error::GroupTableMismatch("biquadratic tower lacks the basic flips".into()));
    };
    let z = tower.uniformizer();
    let i_of = |s: &Automorphism| tower.norm_valuation(&tower.apply(s, z).add(z));
    Ok(RelativeConductors {
        over_first: i_of(&fs)? - 1,
        over_second: i_of(&fq)? - 1,
        third: tower.quotient_break(&[&fq, &fs])?,
    })
}
