//! Exact arithmetic in towers of quadratic Artin-Schreier extensions of k((t)).
//!
//! An element of level i is a vector of 2^i Laurent polynomials; bit j of a
//! coordinate index says whether generator j+1 appears in the basis monomial.
//! Generator i satisfies `g_i^2 + g_i = A_i` with `A_i` an element of level i-1.

use crate::series::Series;

/// An element of some level of a [`TowerAlgebra`].
#[derive(Clone, Debug, PartialEq)]
pub struct TowerElem {
    coords: Vec<Series>,
}

impl TowerElem {
    pub fn from_base(s: Series) -> Self {
        TowerElem { coords: vec![s] }
    }

    pub fn zero(level: usize) -> Self {
        TowerElem {
            coords: vec![Series::zero(); 1 << level],
        }
    }

    pub fn one(level: usize) -> Self {
        Self::monomial(level, 0, Series::one())
    }

    /// `coefficient` times the basis monomial with index `index`.
    pub fn monomial(level: usize, index: usize, coefficient: Series) -> Self {
        let mut e = Self::zero(level);
        e.coords[index] = coefficient;
        e
    }

    pub fn from_coords(coords: Vec<Series>) -> Self {
        assert!(coords.len().is_power_of_two());
        TowerElem { coords }
    }

    pub fn coords(&self) -> &[Series] {
        &self.coords
    }

    pub fn level(&self) -> usize {
        self.coords.len().trailing_zeros() as usize
    }

    pub fn embed(&self, level: usize) -> Self {
        let mut coords = self.coords.clone();
        coords.resize(1 << level.max(self.level()), Series::zero());
        TowerElem { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The K-coordinate, if every other coordinate vanishes.
    pub fn base_part(&self) -> Option<&Series> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| &self.coords[0])
    }

    pub fn add(&self, other: &Self) -> Self {
        let level = self.level().max(other.level());
        let (a, b) = (self.embed(level), other.embed(level));
        TowerElem {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x.add(y)).collect(),
        }
    }

    pub fn scale(&self, s: &Series) -> Self {
        TowerElem {
            coords: self.coords.iter().map(|c| c.mul(s)).collect(),
        }
    }

    fn halves(&self) -> (TowerElem, TowerElem) {
        let h = self.coords.len() / 2;
        (
            TowerElem { coords: self.coords[..h].to_vec() },
            TowerElem { coords: self.coords[h..].to_vec() },
        )
    }

    fn join(lo: TowerElem, hi: TowerElem) -> Self {
        let mut coords = lo.coords;
        coords.extend(hi.coords);
        TowerElem { coords }
    }

    /// Largest number of stored terms in a coordinate.
    pub fn size(&self) -> usize {
        self.coords
            .iter()
            .map(|c| (c.end() - c.start()) as usize)
            .max()
            .unwrap_or(0)
    }
}

/// The relations `A_1, ..., A_n` of a tower, with ring operations.
#[derive(Clone, Debug)]
pub struct TowerAlgebra {
    relations: Vec<TowerElem>,
}

impl TowerAlgebra {
    /// `relations[i]` is `A_{i+1}` and must live in level i.
    pub fn new(relations: Vec<TowerElem>) -> Self {
        let relations = relations
            .into_iter()
            .enumerate()
            .map(|(i, a)| {
                assert!(a.level() <= i, "relation {} must lie below its generator", i + 1);
                a.embed(i)
            })
            .collect();
        TowerAlgebra { relations }
    }

    pub fn height(&self) -> usize {
        self.relations.len()
    }

    pub fn relation(&self, i: usize) -> &TowerElem {
        &self.relations[i - 1]
    }

    /// Generator `i` (1-based) as an element of level i.
    pub fn generator(&self, i: usize) -> TowerElem {
        TowerElem::monomial(i, 1 << (i - 1), Series::one())
    }

    pub fn mul(&self, x: &TowerElem, y: &TowerElem) -> TowerElem {
        let level = x.level().max(y.level());
        self.mul_at(&x.embed(level), &y.embed(level))
    }

    fn mul_at(&self, x: &TowerElem, y: &TowerElem) -> TowerElem {
        let level = x.level();
        if level == 0 {
            return TowerElem::from_base(x.coords[0].mul(&y.coords[0]));
        }
        let (a, b) = x.halves();
        let (c, d) = y.halves();
        let p0 = self.mul_at(&a, &c);
        let p1 = self.mul_at(&b, &d);
        let p2 = self.mul_at(&a.add(&b), &c.add(&d));
        let lo = p0.add(&self.mul_at(&p1, &self.relations[level - 1]));
        let hi = p2.add(&p0);
        TowerElem::join(lo, hi)
    }

    /// Frobenius: `(a + b g)^2 = (a^2 + b^2 A) + b^2 g`.
    pub fn square(&self, x: &TowerElem) -> TowerElem {
        let level = x.level();
        if level == 0 {
            return TowerElem::from_base(x.coords[0].square());
        }
        let (a, b) = x.halves();
        let a2 = self.square(&a);
        let b2 = self.square(&b);
        let lo = a2.add(&self.mul_at(&b2, &self.relations[level - 1]));
        TowerElem::join(lo, b2)
    }

    /// The Artin-Schreier operator `x^2 + x`.
    pub fn wp(&self, x: &TowerElem) -> TowerElem {
        self.square(x).add(x)
    }

    pub fn pow(&self, x: &TowerElem, mut e: u64) -> TowerElem {
        let mut base = x.clone();
        let mut acc = TowerElem::one(x.level());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElem;

    fn t(n: i64) -> Series {
        Series::monomial(FieldElem::ONE, n)
    }

    fn d4_algebra() -> TowerAlgebra {
        // q^2+q = t^-1, s^2+s = t^-3, r^2+r = t^-3 q + t^-5
        TowerAlgebra::new(vec![
            TowerElem::from_base(t(-1)),
            TowerElem::from_base(t(-3)),
            TowerElem::from_coords(vec![t(-5), t(-3), Series::zero(), Series::zero()]),
        ])
    }

    #[test]
    fn defining_relations_hold() {
        let alg = d4_algebra();
        for i in 1..=3 {
            let g = alg.generator(i);
            assert_eq!(alg.wp(&g), alg.relation(i).embed(i));
        }
    }

    #[test]
    fn product_of_q_and_s() {
        let alg = d4_algebra();
        let q = alg.generator(1);
        let s = alg.generator(2);
        let qs = alg.mul(&q, &s);
        let lhs = alg.wp(&qs);
        let (f, g) = (t(-1), t(-3));
        let rhs = q
            .scale(&g)
            .add(&s.scale(&f))
            .add(&TowerElem::from_base(f.mul(&g)));
        assert_eq!(lhs, rhs.embed(2));
    }

    #[test]
    fn ring_laws_spot_check() {
        let alg = d4_algebra();
        let x = alg.generator(3).add(&alg.generator(1).scale(&t(2)));
        let y = alg.generator(2).add(&TowerElem::from_base(t(-1)));
        let z = alg.mul(&alg.generator(1), &alg.generator(3)).add(&TowerElem::one(0));
        assert_eq!(alg.mul(&x, &y), alg.mul(&y, &x));
        assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
        assert_eq!(alg.square(&x), alg.mul(&x, &x));
        assert_eq!(alg.pow(&y, 3), alg.mul(&y, &alg.mul(&y, &y)));
    }
}
