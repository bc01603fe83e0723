//! Centralizer-index verdicts: FCI/BCI reports for finite instances,
//! classifiers for the structured extension shapes, and the truncation
//! ladder that probes infinite bases through growing finite materializations.

use serde::{Deserialize, Serialize};

use crate::abelian::{FinAbelian, QuasiComp, QuasiSpec};
use crate::dedekind::{DedekindGroup, Q8Element};
use crate::error::{Error, Result};
use crate::extension::{CyclicExtension, Index, Top};
use crate::group::{
    centralizer_brute, cyclic_subgroup, cyclic_subgroup_reps, is_cyclic_normal_brute, FiniteGroup,
};
use crate::padic::PadicUnit;
use crate::pauto::PowerAut;

/// Outcome of a single checked condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cond {
    Pass,
    Fail(String),
    /// The available precision cannot distinguish the excluded value.
    Undecidable(u32),
}

impl Cond {
    pub fn is_pass(&self) -> bool {
        matches!(self, Cond::Pass)
    }

    fn combine(conds: &[&Cond]) -> Cond {
        if let Some(f) = conds.iter().find(|c| matches!(c, Cond::Fail(_))) {
            return (*f).clone();
        }
        if let Some(Cond::Undecidable(n)) = conds.iter().find(|c| matches!(c, Cond::Undecidable(_)))
        {
            return Cond::Undecidable(*n);
        }
        Cond::Pass
    }
}

/// One cyclic subgroup `⟨x⟩` inspected by [`check_fci_finite`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FciRecord<E> {
    pub generator: E,
    pub subgroup_order: u64,
    pub is_normal: bool,
    pub centralizer_order: u64,
    /// `|C_G(x):⟨x⟩|`.
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FciReport<E> {
    pub records: Vec<FciRecord<E>>,
    /// Max index over non-normal cyclic subgroups, if any exist.
    pub max_index: Option<u64>,
    pub bci_bound: Option<u64>,
    pub dedekind: bool,
}

/// Exhaustive FCI/BCI inventory of a finite group: one record per cyclic
/// subgroup. Finite groups are always FCI; the value of the report is the
/// bound and the non-normal inventory.
pub fn check_fci_finite<G: FiniteGroup>(g: &G, cap: u64) -> Result<FciReport<G::Elem>> {
    let n = g.group_order();
    if n > cap {
        return Err(Error::OrderCapExceeded { order: n as u128, cap });
    }
    let mut records = Vec::new();
    for x in cyclic_subgroup_reps(g) {
        let sub = cyclic_subgroup(g, &x);
        let is_normal = is_cyclic_normal_brute(g, &x);
        let c = centralizer_brute(g, &x).len() as u64;
        records.push(FciRecord {
            generator: x,
            subgroup_order: sub.len() as u64,
            is_normal,
            centralizer_order: c,
            index: c / sub.len() as u64,
        });
    }
    let max_index = records
        .iter()
        .filter(|r| !r.is_normal)
        .map(|r| r.index)
        .max();
    let dedekind = max_index.is_none();
    Ok(FciReport { records, max_index, bci_bound: max_index, dedekind })
}

/// `G = (⟨g⟩A) × Q` with `A` an infinite abelian 2-group of finite rank,
/// `g² = d0 ∈ A`, `a^g = a^{-1}`, and `Q` finite abelian of odd order: the
/// shape of infinite periodic FCI-groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm32Spec {
    pub a: QuasiSpec,
    /// One bit per component of `a`, selecting socle coordinates of `d0`.
    pub d0_bits: Vec<u8>,
    pub q: FinAbelian,
}

pub fn classify_thm32(spec: &Thm32Spec) -> Cond {
    if !spec.a.is_p_spec(2) {
        return Cond::Fail("A must be a 2-group".into());
    }
    if !spec.a.has_quasicyclic() {
        return Cond::Fail("A must be infinite (some quasicyclic component)".into());
    }
    if spec.q.order() % 2 == 0 {
        return Cond::Fail("Q must be a 2'-group".into());
    }
    Cond::Pass
}

/// Finite materialization of a [`Thm32Spec`] at truncation `level`, as a
/// single extension of `A_level ⊕ Q` with `g` inverting the 2-part and
/// centralizing `Q`.
pub fn build_thm32(spec: &Thm32Spec, level: u32, cap: u64) -> Result<CyclicExtension> {
    if let Cond::Fail(reason) = classify_thm32(spec) {
        return Err(Error::SpecInvalid(reason));
    }
    let a = spec.a.materialize(level, cap)?;
    let socle = spec.a.socle_element(&spec.d0_bits, level, cap)?;
    let (sum, pos_a, _pos_q) = a.direct_sum(&spec.q, cap)?;
    let mut d0_coords = vec![0u64; sum.components().len()];
    for (i, &j) in pos_a.iter().enumerate() {
        d0_coords[j] = socle.coords[i];
    }
    let base = DedekindGroup::abelian_finite(sum.clone());
    let d0 = base.torsion_element(d0_coords)?;
    let prec = sum
        .components()
        .iter()
        .filter(|&&(p, _)| p == 2)
        .map(|&(_, e)| e)
        .max()
        .unwrap_or(1);
    let action = PowerAut::exponents([(2, PadicUnit::new(2, prec, -1)?)].into());
    CyclicExtension::new(base, Top::Finite { order: 2, cocycle: d0 }, action)
}

/// 2-part of the base in a [`Thm36Spec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwoPart {
    None,
    Abelian(Vec<QuasiComp>),
    /// `Q8 × (Z/2)^rank`: finite, non-abelian.
    Hamiltonian { elem2_rank: u32 },
}

/// `G = ⟨g⟩ ⋉ D` with `g` of infinite order acting by the power
/// automorphism `action` on the Dedekind group `D` described per prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm36Spec {
    pub two_part: TwoPart,
    pub odd: Vec<(u64, Vec<QuasiComp>)>,
    pub action: PowerAut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm36Verdict {
    pub cond_i: Cond,
    pub cond_ii: Cond,
    pub cond_iii: Cond,
    pub overall: Cond,
}

fn has_quasi(comps: &[QuasiComp]) -> bool {
    comps.iter().any(|c| matches!(c, QuasiComp::Quasicyclic))
}

/// Checks the three conditions for `⟨g⟩ ⋉ D` to be FCI:
/// (i) the action on a non-abelian `D_2` is trivial;
/// (ii) `t_p ≡ 1 (mod p)` for odd `p`, and `t_p ≠ 1` where `D_p` is infinite;
/// (iii) `t_2 ∉ {1, -1}` where `D_2` is infinite.
pub fn classify_thm36(spec: &Thm36Spec) -> Thm36Verdict {
    let cond_i = match &spec.two_part {
        TwoPart::Hamiltonian { .. } => {
            if spec.action.q8_part() == Q8Element::One {
                Cond::Pass
            } else {
                Cond::Fail("(i) the action on the non-abelian D_2 must be trivial".into())
            }
        }
        _ => Cond::Pass,
    };

    let mut cond_ii = Cond::Pass;
    for (p, comps) in &spec.odd {
        let unit = spec.action.unit_at(*p);
        let res_mod_p = match unit {
            Some(t) => t.residue_mod(1).unwrap_or(1),
            None => 1,
        };
        if res_mod_p != 1 {
            cond_ii = Cond::Fail(format!("(ii) t_{p} ≢ 1 (mod {p})"));
            break;
        }
        if has_quasi(comps) {
            match unit {
                None => {
                    cond_ii = Cond::Fail(format!("(ii) t_{p} = 1 with D_{p} infinite"));
                    break;
                }
                Some(t) => {
                    if t.is_one() {
                        if t.precision() < 2 {
                            cond_ii = Cond::Undecidable(t.precision());
                        } else {
                            cond_ii = Cond::Fail(format!("(ii) t_{p} = 1 with D_{p} infinite"));
                        }
                        break;
                    }
                }
            }
        }
    }

    let two_infinite = matches!(&spec.two_part, TwoPart::Abelian(comps) if has_quasi(comps));
    let cond_iii = if two_infinite {
        match spec.action.unit_at(2) {
            None => Cond::Fail("(iii) t_2 = 1 with D_2 infinite".into()),
            Some(t) => {
                if t.precision() < 3 {
                    // every unit is ±1 mod 4: nothing can be excluded
                    Cond::Undecidable(t.precision())
                } else if t.is_one() {
                    Cond::Fail("(iii) t_2 = 1 with D_2 infinite".into())
                } else if t.is_minus_one() {
                    Cond::Fail("(iii) t_2 = -1 with D_2 infinite".into())
                } else {
                    Cond::Pass
                }
            }
        }
    } else {
        Cond::Pass
    };

    let overall = Cond::combine(&[&cond_i, &cond_ii, &cond_iii]);
    Thm36Verdict { cond_i, cond_ii, cond_iii, overall }
}

fn quasi_spec_of(spec: &Thm36Spec) -> Result<QuasiSpec> {
    let mut primes: Vec<(u64, Vec<QuasiComp>)> = Vec::new();
    if let TwoPart::Abelian(comps) = &spec.two_part {
        primes.push((2, comps.clone()));
    }
    primes.extend(spec.odd.iter().cloned());
    QuasiSpec::new(primes)
}

/// Materializes a [`Thm36Spec`] at the given truncation level as
/// `Z ⋉ D_level`.
pub fn build_thm36(spec: &Thm36Spec, level: u32, cap: u64) -> Result<CyclicExtension> {
    let torsion = quasi_spec_of(spec)?.materialize(level, cap)?;
    let base = match &spec.two_part {
        TwoPart::Hamiltonian { elem2_rank } => {
            let elem2 = FinAbelian::new(vec![(2, 1); *elem2_rank as usize])?;
            DedekindGroup::hamiltonian(elem2, torsion)?
        }
        _ => DedekindGroup::abelian_finite(torsion),
    };
    CyclicExtension::new(base, Top::Infinite, spec.action.clone())
}

/// Element sampling window for infinite groups: probes `x = g^k d` for
/// `1 ≤ k ≤ k_max` and every base element `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleWindow {
    pub k_max: i64,
}

impl Default for SampleWindow {
    fn default() -> Self {
        SampleWindow { k_max: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LadderVerdict {
    Stabilized { level: u32, value: u64 },
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderResult {
    /// `(level, max centralizer index over the sample window)`.
    pub rows: Vec<(u32, u64)>,
    pub verdict: LadderVerdict,
}

/// Runs `build` at each level and records the maximum `|C_G(x):⟨x⟩|` over
/// the window of aperiodic samples. Stabilization requires the two top
/// values to agree; divergence requires strict growth across the top three.
pub fn ladder<F>(
    build: F,
    levels: std::ops::RangeInclusive<u32>,
    window: SampleWindow,
) -> Result<LadderResult>
where
    F: Fn(u32) -> Result<CyclicExtension>,
{
    let mut rows = Vec::new();
    for level in levels {
        let g = build(level)?;
        if !matches!(g.top(), Top::Infinite) {
            return Err(Error::Precondition("ladder requires an infinite top".into()));
        }
        let mut max = 0u64;
        for k in 1..=window.k_max {
            for d in g.base().try_elements()? {
                let x = g.element(k, d)?;
                if let Index::Finite(idx) = g.centralizer_index(&x)? {
                    max = max.max(idx);
                }
            }
        }
        rows.push((level, max));
    }
    let vals: Vec<u64> = rows.iter().map(|&(_, v)| v).collect();
    let verdict = if vals.len() >= 2 && vals[vals.len() - 1] == vals[vals.len() - 2] {
        LadderVerdict::Stabilized {
            level: rows[rows.len() - 1].0,
            value: vals[vals.len() - 1],
        }
    } else if vals.len() >= 3 {
        let top = &vals[vals.len() - 3..];
        if top[0] < top[1] && top[1] < top[2] {
            LadderVerdict::Diverging
        } else {
            LadderVerdict::Inconclusive
        }
    } else {
        LadderVerdict::Inconclusive
    };
    Ok(LadderResult { rows, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm43Report {
    /// `2^{r+1}` with `r = r_2(A)`.
    pub bound: u64,
    /// Max `|C_G(x)|` over sampled non-normal cyclic subgroups.
    pub max_centralizer: u64,
    pub achieved: bool,
    pub within_bound: bool,
    /// Every sampled infinite-order element generates a normal subgroup.
    pub infinite_order_normality: bool,
}

/// Probes the BCI bound on a reflection extension of a finitely generated
/// abelian group: `|C_G(x)| ≤ 2^{r+1}` for every non-normal `⟨x⟩`, with
/// equality attained, and `⟨x⟩ ⊴ G` for every infinite-order sample.
pub fn check_bci_bound_thm43(g: &CyclicExtension, free_bound: i64) -> Result<Thm43Report> {
    let window = g.window_elements(free_bound)?;
    let r = g
        .base()
        .torsion()
        .components()
        .iter()
        .filter(|&&(p, _)| p == 2)
        .count() as u32;
    let bound = 1u64 << (r + 1);

    let mut max_centralizer = 0u64;
    let mut infinite_order_normality = true;
    for x in &window {
        let infinite_order = g.order_of(x)?.finite().is_none();
        if infinite_order {
            if !g.is_cyclic_normal(x)? {
                infinite_order_normality = false;
            }
            continue;
        }
        if x.k % 2 == 0 || g.is_cyclic_normal(x)? {
            continue;
        }
        // the centralizer of a reflection lies entirely inside the window
        let mut count = 0u64;
        for y in &window {
            if g.mul(x, y)? == g.mul(y, x)? {
                count += 1;
            }
        }
        let closed = g.reflection_centralizer_order(x)?;
        if closed != count {
            return Err(Error::Inconsistent(
                "reflection centralizer closed form disagrees with enumeration".into(),
            ));
        }
        max_centralizer = max_centralizer.max(count);
    }

    Ok(Thm43Report {
        bound,
        max_centralizer,
        achieved: max_centralizer == bound,
        within_bound: max_centralizer <= bound,
        infinite_order_normality,
    })
}
