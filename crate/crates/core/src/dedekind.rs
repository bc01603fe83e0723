//! Dedekind groups: abelian groups, and Hamiltonian groups
//! `Q8 × (elementary abelian 2-group) × (abelian odd torsion)`.

use serde::{Deserialize, Serialize};

use crate::abelian::{AbElement, FgAbelian, FinAbelian, Order};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// The quaternion group of order 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Q8Element {
    One,
    MinusOne,
    I,
    MinusI,
    J,
    MinusJ,
    K,
    MinusK,
}

use Q8Element::*;

impl Q8Element {
    pub const ALL: [Q8Element; 8] = [One, MinusOne, I, MinusI, J, MinusJ, K, MinusK];

    fn split(self) -> (bool, u8) {
        // (negative sign, axis) with axes 0=1, 1=i, 2=j, 3=k
        match self {
            One => (false, 0),
            MinusOne => (true, 0),
            I => (false, 1),
            MinusI => (true, 1),
            J => (false, 2),
            MinusJ => (true, 2),
            K => (false, 3),
            MinusK => (true, 3),
        }
    }

    fn join(neg: bool, axis: u8) -> Q8Element {
        match (neg, axis) {
            (false, 0) => One,
            (true, 0) => MinusOne,
            (false, 1) => I,
            (true, 1) => MinusI,
            (false, 2) => J,
            (true, 2) => MinusJ,
            (false, 3) => K,
            (true, 3) => MinusK,
            _ => unreachable!(),
        }
    }

    pub fn mul(self, other: Q8Element) -> Q8Element {
        let (s1, a1) = self.split();
        let (s2, a2) = other.split();
        // axis multiplication table for {1, i, j, k}
        let (neg, axis) = match (a1, a2) {
            (0, a) => (false, a),
            (a, 0) => (false, a),
            (1, 1) | (2, 2) | (3, 3) => (true, 0),
            (1, 2) => (false, 3), // ij = k
            (2, 1) => (true, 3),
            (2, 3) => (false, 1), // jk = i
            (3, 2) => (true, 1),
            (3, 1) => (false, 2), // ki = j
            (1, 3) => (true, 2),
            _ => unreachable!(),
        };
        Q8Element::join(s1 ^ s2 ^ neg, axis)
    }

    pub fn inv(self) -> Q8Element {
        let (s, a) = self.split();
        if a == 0 { self } else { Q8Element::join(!s, a) }
    }

    pub fn pow(self, k: i64) -> Q8Element {
        let ord = self.order() as i64;
        let mut e = k.rem_euclid(ord);
        let mut acc = One;
        while e > 0 {
            acc = acc.mul(self);
            e -= 1;
        }
        acc
    }

    pub fn order(self) -> u64 {
        match self {
            One => 1,
            MinusOne => 2,
            _ => 4,
        }
    }

    /// `q^{-1} · self · q`.
    pub fn conj_by(self, q: Q8Element) -> Q8Element {
        q.inv().mul(self).mul(q)
    }

    pub fn is_central(self) -> bool {
        matches!(self, One | MinusOne)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            One => "1",
            MinusOne => "-1",
            I => "i",
            MinusI => "-i",
            J => "j",
            MinusJ => "-j",
            K => "k",
            MinusK => "-k",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Q8Element> {
        Q8Element::ALL.into_iter().find(|q| q.symbol() == s)
    }
}

/// A Dedekind group: abelian, or Hamiltonian with one implicit `Q8` factor.
///
/// In the Hamiltonian variant the torsion group's 2-part must be elementary
/// abelian; the classification of Hamiltonian groups supplies exactly the
/// shape `Q8 × E × A` with `E` elementary abelian and `A` odd.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DedekindGroup {
    Abelian(FgAbelian),
    Hamiltonian { torsion: FinAbelian },
}

/// Element of a [`DedekindGroup`]; `q` is `One` and `free` empty except for
/// the variants that use them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DElement {
    pub q: Q8Element,
    pub free: Vec<i64>,
    pub tor: AbElement,
}

/// Sylow subgroup description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SylowSubgroup {
    Abelian(FinAbelian),
    /// `Q8 ×` the given elementary abelian 2-group.
    Q8Times(FinAbelian),
}

impl SylowSubgroup {
    pub fn order(&self) -> u64 {
        match self {
            SylowSubgroup::Abelian(a) => a.order(),
            SylowSubgroup::Q8Times(e) => 8 * e.order(),
        }
    }
}

impl DedekindGroup {
    pub fn abelian_finite(torsion: FinAbelian) -> Self {
        DedekindGroup::Abelian(FgAbelian::finite(torsion))
    }

    pub fn hamiltonian(elem2: FinAbelian, odd: FinAbelian) -> Result<Self> {
        if !elem2.is_p_group(2) || !elem2.two_part_elementary() {
            return Err(Error::SpecInvalid("elem2 part must be elementary abelian 2-group".into()));
        }
        if odd.primes().contains(&2) {
            return Err(Error::SpecInvalid("odd part must have odd order".into()));
        }
        let (torsion, _, _) = elem2.direct_sum(&odd, crate::abelian::DEFAULT_ORDER_CAP)?;
        Ok(DedekindGroup::Hamiltonian { torsion })
    }

    pub fn q8() -> Self {
        DedekindGroup::Hamiltonian { torsion: FinAbelian::trivial() }
    }

    pub fn is_hamiltonian(&self) -> bool {
        matches!(self, DedekindGroup::Hamiltonian { .. })
    }

    pub fn is_periodic(&self) -> bool {
        match self {
            DedekindGroup::Abelian(a) => a.is_finite(),
            DedekindGroup::Hamiltonian { .. } => true,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.is_periodic()
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            DedekindGroup::Abelian(a) if a.is_finite() => Some(a.torsion.order()),
            DedekindGroup::Abelian(_) => None,
            DedekindGroup::Hamiltonian { torsion } => Some(8 * torsion.order()),
        }
    }

    pub fn torsion(&self) -> &FinAbelian {
        match self {
            DedekindGroup::Abelian(a) => &a.torsion,
            DedekindGroup::Hamiltonian { torsion } => torsion,
        }
    }

    pub fn free_rank(&self) -> u32 {
        match self {
            DedekindGroup::Abelian(a) => a.free_rank,
            DedekindGroup::Hamiltonian { .. } => 0,
        }
    }

    pub fn identity(&self) -> DElement {
        DElement {
            q: One,
            free: vec![0; self.free_rank() as usize],
            tor: self.torsion().zero(),
        }
    }

    fn check(&self, x: &DElement) -> Result<()> {
        if x.free.len() != self.free_rank() as usize
            || x.tor.coords.len() != self.torsion().components().len()
        {
            return Err(Error::GroupMismatch);
        }
        if !self.is_hamiltonian() && x.q != One {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn element(&self, q: Q8Element, free: Vec<i64>, tor: Vec<u64>) -> Result<DElement> {
        let x = DElement { q, free, tor: self.torsion().element(tor)? };
        self.check(&x)?;
        Ok(x)
    }

    /// Convenience constructor for a pure torsion element.
    pub fn torsion_element(&self, tor: Vec<u64>) -> Result<DElement> {
        self.element(One, vec![0; self.free_rank() as usize], tor)
    }

    pub fn mul(&self, x: &DElement, y: &DElement) -> Result<DElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(DElement {
            q: x.q.mul(y.q),
            free: x.free.iter().zip(&y.free).map(|(a, b)| a + b).collect(),
            tor: self.torsion().add(&x.tor, &y.tor)?,
        })
    }

    pub fn inv(&self, x: &DElement) -> Result<DElement> {
        self.check(x)?;
        Ok(DElement {
            q: x.q.inv(),
            free: x.free.iter().map(|a| -a).collect(),
            tor: self.torsion().neg(&x.tor)?,
        })
    }

    pub fn pow(&self, x: &DElement, k: i64) -> Result<DElement> {
        self.check(x)?;
        Ok(DElement {
            q: x.q.pow(k),
            free: x.free.iter().map(|a| k * a).collect(),
            tor: self.torsion().scalar_mul(k, &x.tor)?,
        })
    }

    pub fn order_of(&self, x: &DElement) -> Result<Order> {
        self.check(x)?;
        if x.free.iter().any(|&a| a != 0) {
            return Ok(Order::Infinite);
        }
        let t = self.torsion().order_of(&x.tor)?;
        Ok(Order::Finite(crate::abelian::lcm(x.q.order(), t)))
    }

    /// All elements; errors on non-periodic groups.
    pub fn try_elements(&self) -> Result<Vec<DElement>> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        let tors = self.torsion().elements();
        let qs: &[Q8Element] = if self.is_hamiltonian() { &Q8Element::ALL } else { &[One] };
        let mut out = Vec::with_capacity(qs.len() * tors.len());
        for &q in qs {
            for t in &tors {
                out.push(DElement { q, free: vec![], tor: t.clone() });
            }
        }
        Ok(out)
    }

    /// Generators: Q8 generators (if present), then one generator per free
    /// and torsion component.
    pub fn generators(&self) -> Vec<DElement> {
        let mut out = Vec::new();
        if self.is_hamiltonian() {
            for q in [I, J] {
                let mut g = self.identity();
                g.q = q;
                out.push(g);
            }
        }
        for r in 0..self.free_rank() as usize {
            let mut g = self.identity();
            g.free[r] = 1;
            out.push(g);
        }
        for i in 0..self.torsion().components().len() {
            let mut g = self.identity();
            g.tor.coords[i] = 1;
            out.push(g);
        }
        out
    }

    /// `π(D)`, the set of primes dividing element orders.
    pub fn primes(&self) -> Result<Vec<u64>> {
        if !self.is_periodic() {
            return Err(Error::NonPeriodic);
        }
        let mut ps = self.torsion().primes();
        if self.is_hamiltonian() && !ps.contains(&2) {
            ps.insert(0, 2);
        }
        Ok(ps)
    }

    /// The unique Sylow `p`-subgroup.
    pub fn sylow(&self, p: u64) -> Result<SylowSubgroup> {
        if !self.is_periodic() {
            return Err(Error::NonPeriodic);
        }
        let part = self.torsion().sylow(p);
        if self.is_hamiltonian() && p == 2 {
            Ok(SylowSubgroup::Q8Times(part))
        } else {
            Ok(SylowSubgroup::Abelian(part))
        }
    }

    /// Exponent of the Sylow `p`-part (including the `Q8` factor).
    pub fn exponent_at(&self, p: u64) -> u64 {
        let mut e = self.torsion().sylow(p).exponent();
        if self.is_hamiltonian() && p == 2 {
            e = crate::abelian::lcm(e, 4);
        }
        e
    }
}

impl FiniteGroup for DedekindGroup {
    type Elem = DElement;

    fn elements(&self) -> Vec<DElement> {
        self.try_elements().expect("FiniteGroup impl requires a periodic Dedekind group")
    }

    fn identity(&self) -> DElement {
        DedekindGroup::identity(self)
    }

    fn op(&self, a: &DElement, b: &DElement) -> DElement {
        self.mul(a, b).expect("elements of this group")
    }

    fn inv(&self, a: &DElement) -> DElement {
        DedekindGroup::inv(self, a).expect("element of this group")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{self, testutil};

    #[test]
    fn q8_table() {
        assert_eq!(I.mul(J), K);
        assert_eq!(J.mul(I), MinusK);
        assert_eq!(I.mul(I), MinusOne);
        assert_eq!(J.mul(K), I);
        assert_eq!(K.mul(I), J);
        assert_eq!(I.order(), 4);
        assert_eq!(MinusOne.order(), 2);
        for q in Q8Element::ALL {
            assert_eq!(q.mul(q.inv()), One);
            assert_eq!(q.pow(4), One);
            assert!(matches!(q.pow(2), One | MinusOne));
        }
    }

    #[test]
    fn q8_is_a_group() {
        testutil::check_group_axioms(&DedekindGroup::q8());
    }

    #[test]
    fn hamiltonian_mul_componentwise() {
        let g = DedekindGroup::hamiltonian(
            FinAbelian::trivial(),
            FinAbelian::new(vec![(3, 1)]).unwrap(),
        )
        .unwrap();
        let x = g.element(I, vec![], vec![1]).unwrap();
        let y = g.element(J, vec![], vec![2]).unwrap();
        let z = g.mul(&x, &y).unwrap();
        assert_eq!(z.q, K);
        assert_eq!(z.tor.coords, vec![0]);
        assert_eq!(g.order_of(&x).unwrap(), Order::Finite(12));
    }

    #[test]
    fn sylow_and_primes() {
        let g = DedekindGroup::hamiltonian(
            FinAbelian::new(vec![(2, 1)]).unwrap(),
            FinAbelian::new(vec![(3, 2)]).unwrap(),
        )
        .unwrap();
        assert_eq!(g.primes().unwrap(), vec![2, 3]);
        assert_eq!(g.sylow(2).unwrap().order(), 16);
        assert_eq!(g.sylow(3).unwrap().order(), 9);

        let z12 = DedekindGroup::abelian_finite(FinAbelian::new(vec![(2, 2), (3, 1)]).unwrap());
        assert_eq!(z12.sylow(2).unwrap(), SylowSubgroup::Abelian(FinAbelian::new(vec![(2, 2)]).unwrap()));
        assert_eq!(z12.sylow(3).unwrap(), SylowSubgroup::Abelian(FinAbelian::new(vec![(3, 1)]).unwrap()));

        let trivial = DedekindGroup::abelian_finite(FinAbelian::trivial());
        assert!(trivial.primes().unwrap().is_empty());
    }

    #[test]
    fn hamiltonian_groups_are_dedekind() {
        for (e2, odd) in [
            (vec![], vec![]),
            (vec![(2, 1)], vec![]),
            (vec![], vec![(3, 1)]),
            (vec![(2, 1)], vec![(3, 1)]),
        ] {
            let g = DedekindGroup::hamiltonian(
                FinAbelian::new(e2).unwrap(),
                FinAbelian::new(odd).unwrap(),
            )
            .unwrap();
            assert!(group::is_dedekind(&g, 1 << 12).unwrap().is_ok());
        }
    }

    #[test]
    fn dedekind_agrees_with_all_subgroup_normality() {
        // oracle: enumerate all subgroups and check each is normal
        let groups = vec![
            DedekindGroup::q8(),
            DedekindGroup::abelian_finite(FinAbelian::new(vec![(2, 2), (3, 1)]).unwrap()),
            DedekindGroup::hamiltonian(
                FinAbelian::new(vec![(2, 1)]).unwrap(),
                FinAbelian::trivial(),
            )
            .unwrap(),
        ];
        for g in groups {
            let fast = group::is_dedekind(&g, 1 << 12).unwrap().is_ok();
            let slow = testutil::all_subgroups(&g)
                .iter()
                .all(|h| testutil::is_normal_subgroup(&g, h));
            assert_eq!(fast, slow);
        }
    }
}
