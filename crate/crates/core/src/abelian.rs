//! Finite and finitely generated abelian groups with exact element
//! arithmetic, `Ω_k` subgroups, ranks, and quasicyclic truncation ladders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{checked_pow, is_prime};

/// Default cap on materialized group orders.
pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 { 0 } else { a / gcd(a, b) * b }
}

/// Order of a group element: finite or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(*n),
            Order::Infinite => None,
        }
    }
}

/// A finite abelian group `⊕ Z/p^e`, components canonically sorted by `(p, e)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbelian {
    comps: Vec<(u64, u32)>,
}

/// An element of a [`FinAbelian`], one residue per component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbElement {
    pub coords: Vec<u64>,
}

impl FinAbelian {
    pub fn new(comps: Vec<(u64, u32)>) -> Result<Self> {
        Self::with_cap(comps, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(mut comps: Vec<(u64, u32)>, cap: u64) -> Result<Self> {
        let mut order: u128 = 1;
        for &(p, e) in &comps {
            if !is_prime(p) {
                return Err(Error::SpecInvalid(format!("{p} is not prime")));
            }
            if e == 0 {
                return Err(Error::SpecInvalid("component exponent must be >= 1".into()));
            }
            let m = checked_pow(p, e).ok_or(Error::OrderCapExceeded {
                order: u128::MAX,
                cap,
            })? as u128;
            order *= m;
            if order > cap as u128 {
                return Err(Error::OrderCapExceeded { order, cap });
            }
        }
        comps.sort();
        Ok(FinAbelian { comps })
    }

    pub fn trivial() -> Self {
        FinAbelian { comps: vec![] }
    }

    pub fn components(&self) -> &[(u64, u32)] {
        &self.comps
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.comps.iter().map(|&(p, e)| checked_pow(p, e).unwrap()).collect()
    }

    pub fn order(&self) -> u64 {
        self.moduli().iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.comps.is_empty()
    }

    /// Exponent: lcm of the component orders.
    pub fn exponent(&self) -> u64 {
        self.moduli().into_iter().fold(1, lcm)
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.comps.iter().map(|&(p, _)| p).collect();
        ps.dedup();
        ps
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.comps.iter().all(|&(q, _)| q == p)
    }

    /// The `p`-primary component as its own group.
    pub fn sylow(&self, p: u64) -> FinAbelian {
        FinAbelian { comps: self.comps.iter().copied().filter(|&(q, _)| q == p).collect() }
    }

    /// Whether all 2-components have exponent 1.
    pub fn two_part_elementary(&self) -> bool {
        self.comps.iter().all(|&(p, e)| p != 2 || e == 1)
    }

    pub fn zero(&self) -> AbElement {
        AbElement { coords: vec![0; self.comps.len()] }
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<AbElement> {
        if coords.len() != self.comps.len() {
            return Err(Error::GroupMismatch);
        }
        for (c, m) in coords.iter().zip(self.moduli()) {
            if *c >= m {
                return Err(Error::GroupMismatch);
            }
        }
        Ok(AbElement { coords })
    }

    fn check(&self, a: &AbElement) -> Result<()> {
        if a.coords.len() != self.comps.len() {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &AbElement, b: &AbElement) -> Result<AbElement> {
        self.check(a)?;
        self.check(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(self.moduli())
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        Ok(AbElement { coords })
    }

    pub fn neg(&self, a: &AbElement) -> Result<AbElement> {
        self.check(a)?;
        let coords = a
            .coords
            .iter()
            .zip(self.moduli())
            .map(|(x, m)| (m - x) % m)
            .collect();
        Ok(AbElement { coords })
    }

    /// `n·a`, with `n` possibly negative.
    pub fn scalar_mul(&self, n: i64, a: &AbElement) -> Result<AbElement> {
        self.check(a)?;
        let coords = a
            .coords
            .iter()
            .zip(self.moduli())
            .map(|(x, m)| {
                let n = n.rem_euclid(m as i64) as u128;
                ((n * *x as u128) % m as u128) as u64
            })
            .collect();
        Ok(AbElement { coords })
    }

    /// Per-component scalar action: coordinate `i` is multiplied by `mults[i]`.
    pub fn component_mul(&self, mults: &[u64], a: &AbElement) -> Result<AbElement> {
        self.check(a)?;
        if mults.len() != self.comps.len() {
            return Err(Error::GroupMismatch);
        }
        let coords = a
            .coords
            .iter()
            .zip(mults)
            .zip(self.moduli())
            .map(|((x, t), m)| ((*t as u128 * *x as u128) % m as u128) as u64)
            .collect();
        Ok(AbElement { coords })
    }

    /// Least `n >= 1` with `n·a = 0`.
    pub fn order_of(&self, a: &AbElement) -> Result<u64> {
        self.check(a)?;
        let mut ord = 1u64;
        for (x, m) in a.coords.iter().zip(self.moduli()) {
            ord = lcm(ord, m / gcd(*x, m));
        }
        Ok(ord)
    }

    /// All elements, in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<AbElement> {
        let moduli = self.moduli();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = vec![0u64; moduli.len()];
        loop {
            out.push(AbElement { coords: cur.clone() });
            let mut i = moduli.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < moduli[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// `Ω_k = {a : p^k·a = 0}` of an abelian `p`-group.
    pub fn omega(&self, k: u32, p: u64) -> Result<OmegaSubgroup> {
        if !self.is_p_group(p) {
            return Err(Error::NotAPGroup(p));
        }
        let shape: Vec<(usize, u32)> = self
            .comps
            .iter()
            .enumerate()
            .filter_map(|(i, &(_, e))| {
                let me = e.min(k);
                (me >= 1).then_some((i, me))
            })
            .collect();
        Ok(OmegaSubgroup { parent: self.clone(), p, k, shape })
    }

    /// Direct sum, returning the positions of each summand's components in
    /// the canonically sorted result.
    pub fn direct_sum(&self, other: &FinAbelian, cap: u64) -> Result<(FinAbelian, Vec<usize>, Vec<usize>)> {
        let mut tagged: Vec<((u64, u32), usize)> = Vec::new();
        for (i, &c) in self.comps.iter().enumerate() {
            tagged.push((c, i));
        }
        for (i, &c) in other.comps.iter().enumerate() {
            tagged.push((c, self.comps.len() + i));
        }
        tagged.sort_by_key(|&(c, _)| c);
        let comps: Vec<(u64, u32)> = tagged.iter().map(|&(c, _)| c).collect();
        let sum = FinAbelian::with_cap(comps, cap)?;
        let mut left = vec![0usize; self.comps.len()];
        let mut right = vec![0usize; other.comps.len()];
        for (pos, &(_, tag)) in tagged.iter().enumerate() {
            if tag < self.comps.len() {
                left[tag] = pos;
            } else {
                right[tag - self.comps.len()] = pos;
            }
        }
        Ok((sum, left, right))
    }
}

/// `Ω_k(A)` of an abelian `p`-group, kept aligned with its parent's
/// components so membership and embedding are coordinatewise.
#[derive(Debug, Clone)]
pub struct OmegaSubgroup {
    parent: FinAbelian,
    p: u64,
    k: u32,
    /// (parent component index, exponent min(k, e)).
    shape: Vec<(usize, u32)>,
}

impl OmegaSubgroup {
    pub fn order(&self) -> u64 {
        self.shape.iter().map(|&(_, e)| checked_pow(self.p, e).unwrap()).product()
    }

    /// The abstract isomorphism type of the subgroup.
    pub fn as_group(&self) -> FinAbelian {
        FinAbelian::new(self.shape.iter().map(|&(_, e)| (self.p, e)).collect())
            .expect("subgroup of a valid group")
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn contains(&self, a: &AbElement) -> Result<bool> {
        let pk = match checked_pow(self.p, self.k) {
            Some(v) => v,
            None => return Ok(true), // p^k beyond u64 kills any coordinate
        };
        let scaled = self.parent.scalar_mul(pk as i64, a)?;
        Ok(scaled == self.parent.zero())
    }

    /// The subgroup's elements as elements of the parent.
    pub fn elements_in_parent(&self) -> Vec<AbElement> {
        let shifts: Vec<(usize, u64)> = self
            .shape
            .iter()
            .map(|&(i, e)| {
                let parent_e = self.parent.components()[i].1;
                (i, checked_pow(self.p, parent_e - e).unwrap())
            })
            .collect();
        let moduli: Vec<u64> = self.shape.iter().map(|&(_, e)| checked_pow(self.p, e).unwrap()).collect();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = vec![0u64; moduli.len()];
        loop {
            let mut coords = self.parent.zero().coords;
            for (&(i, shift), &c) in shifts.iter().zip(cur.iter()) {
                coords[i] = c * shift;
            }
            out.push(AbElement { coords });
            let mut i = moduli.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < moduli[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

/// A finitely generated abelian group `Z^r ⊕ torsion`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgAbelian {
    pub free_rank: u32,
    pub torsion: FinAbelian,
}

/// Element of an [`FgAbelian`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FgElement {
    pub free: Vec<i64>,
    pub tor: AbElement,
}

impl FgAbelian {
    pub fn finite(torsion: FinAbelian) -> Self {
        FgAbelian { free_rank: 0, torsion }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn zero(&self) -> FgElement {
        FgElement { free: vec![0; self.free_rank as usize], tor: self.torsion.zero() }
    }

    pub fn element(&self, free: Vec<i64>, tor: Vec<u64>) -> Result<FgElement> {
        if free.len() != self.free_rank as usize {
            return Err(Error::GroupMismatch);
        }
        Ok(FgElement { free, tor: self.torsion.element(tor)? })
    }

    pub fn add(&self, a: &FgElement, b: &FgElement) -> Result<FgElement> {
        if a.free.len() != self.free_rank as usize || b.free.len() != self.free_rank as usize {
            return Err(Error::GroupMismatch);
        }
        Ok(FgElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            tor: self.torsion.add(&a.tor, &b.tor)?,
        })
    }

    pub fn neg(&self, a: &FgElement) -> Result<FgElement> {
        Ok(FgElement {
            free: a.free.iter().map(|x| -x).collect(),
            tor: self.torsion.neg(&a.tor)?,
        })
    }

    pub fn scalar_mul(&self, n: i64, a: &FgElement) -> Result<FgElement> {
        Ok(FgElement {
            free: a.free.iter().map(|x| n * x).collect(),
            tor: self.torsion.scalar_mul(n, &a.tor)?,
        })
    }

    pub fn order_of(&self, a: &FgElement) -> Result<Order> {
        if a.free.iter().any(|&x| x != 0) {
            return Ok(Order::Infinite);
        }
        Ok(Order::Finite(self.torsion.order_of(&a.tor)?))
    }

    /// Number of torsion components at prime `p`.
    pub fn rank_p(&self, p: u64) -> u32 {
        self.torsion.components().iter().filter(|&&(q, _)| q == p).count() as u32
    }

    pub fn rank_0(&self) -> u32 {
        self.free_rank
    }

    /// `r(A) = r_0(A) + Σ_p r_p(A)`.
    pub fn total_rank(&self) -> u32 {
        self.free_rank + self.torsion.components().len() as u32
    }
}

/// One component of a quasicyclic truncation spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuasiComp {
    Finite(u32),
    Quasicyclic,
}

/// A per-prime list of cyclic/quasicyclic components; quasicyclic entries are
/// materialized to `Z/p^n` at ladder level `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiSpec {
    primes: Vec<(u64, Vec<QuasiComp>)>,
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    p: u64,
    e: u32,
    quasi: bool,
    spec_id: usize,
}

impl QuasiSpec {
    pub fn new(mut primes: Vec<(u64, Vec<QuasiComp>)>) -> Result<Self> {
        for (p, comps) in &primes {
            if !is_prime(*p) {
                return Err(Error::SpecInvalid(format!("{p} is not prime")));
            }
            if comps.is_empty() {
                return Err(Error::SpecInvalid(format!("empty component list at p={p}")));
            }
        }
        primes.sort_by_key(|&(p, _)| p);
        let mut ps: Vec<u64> = primes.iter().map(|&(p, _)| p).collect();
        ps.dedup();
        if ps.len() != primes.len() {
            return Err(Error::SpecInvalid("duplicate prime in spec".into()));
        }
        Ok(QuasiSpec { primes })
    }

    pub fn primes(&self) -> &[(u64, Vec<QuasiComp>)] {
        &self.primes
    }

    pub fn has_quasicyclic(&self) -> bool {
        self.primes.iter().any(|(_, cs)| cs.iter().any(|c| matches!(c, QuasiComp::Quasicyclic)))
    }

    pub fn prime_has_quasicyclic(&self, p: u64) -> bool {
        self.primes
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|(_, cs)| cs.iter().any(|c| matches!(c, QuasiComp::Quasicyclic)))
            .unwrap_or(false)
    }

    pub fn is_p_spec(&self, p: u64) -> bool {
        self.primes.iter().all(|&(q, _)| q == p)
    }

    fn slots(&self, level: u32) -> Vec<Slot> {
        let mut slots = Vec::new();
        let mut id = 0usize;
        for (p, comps) in &self.primes {
            for c in comps {
                let (e, quasi) = match c {
                    QuasiComp::Finite(e) => (*e, false),
                    QuasiComp::Quasicyclic => (level, true),
                };
                slots.push(Slot { p: *p, e, quasi, spec_id: id });
                id += 1;
            }
        }
        slots.sort_by_key(|s| (s.p, s.e, s.spec_id));
        slots
    }

    /// Finite truncation at the given level.
    pub fn materialize(&self, level: u32, cap: u64) -> Result<FinAbelian> {
        if level == 0 {
            return Err(Error::SpecInvalid("level must be >= 1".into()));
        }
        let comps = self.slots(level).iter().map(|s| (s.p, s.e)).collect();
        FinAbelian::with_cap(comps, cap)
    }

    /// The standard directed-system embedding of the level-`n` truncation into
    /// the level-`n+1` one: quasicyclic coordinates are multiplied by `p`,
    /// finite coordinates are carried over.
    pub fn embed_next(&self, level: u32, a: &AbElement, cap: u64) -> Result<AbElement> {
        let lo = self.slots(level);
        let hi = self.slots(level + 1);
        if a.coords.len() != lo.len() {
            return Err(Error::GroupMismatch);
        }
        // ensure the target exists within the cap
        self.materialize(level + 1, cap)?;
        let mut coords = vec![0u64; hi.len()];
        for (pos_hi, s_hi) in hi.iter().enumerate() {
            let pos_lo = lo.iter().position(|s| s.spec_id == s_hi.spec_id).expect("same spec");
            let v = a.coords[pos_lo];
            coords[pos_hi] = if s_hi.quasi { v * s_hi.p } else { v };
        }
        Ok(AbElement { coords })
    }

    /// The socle element with the given 0/1 pattern per spec component: bit
    /// `i` selects the involution (order-`p` element) of component `i`. The
    /// pattern is level-stable under the directed-system embedding.
    pub fn socle_element(&self, bits: &[u8], level: u32, cap: u64) -> Result<AbElement> {
        let slots = self.slots(level);
        if bits.len() != slots.len() {
            return Err(Error::SpecInvalid(format!(
                "socle pattern has {} entries, spec has {} components",
                bits.len(),
                slots.len()
            )));
        }
        self.materialize(level, cap)?;
        let mut coords = vec![0u64; slots.len()];
        for (pos, s) in slots.iter().enumerate() {
            let bit = bits[s.spec_id];
            if bit > 1 {
                return Err(Error::SpecInvalid("socle pattern entries must be 0 or 1".into()));
            }
            if bit == 1 {
                coords[pos] = checked_pow(s.p, s.e - 1).unwrap();
            }
        }
        Ok(AbElement { coords })
    }
}
