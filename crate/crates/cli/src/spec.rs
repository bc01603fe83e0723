//! The on-disk group spec format: a TOML document describing one group,
//! canonicalized so that parse/serialize round-trips byte-identically.

use fci_core::abelian::{FgAbelian, FinAbelian, QuasiComp, QuasiSpec, DEFAULT_ORDER_CAP};
use fci_core::dedekind::{DedekindGroup, Q8Element};
use fci_core::extension::{fg_abelian_extension, CyclicExtension, Top};
use fci_core::padic::PadicUnit;
use fci_core::pauto::PowerAut;
use fci_core::verify::{Thm32Spec, Thm36Spec, TwoPart};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    FiniteAbelian,
    Dedekind,
    CyclicExtension,
    Thm32,
    Thm36,
    Thm43,
}

/// Torsion components as `"p^e"` strings, with `"p^inf"` marking a
/// quasicyclic (Prüfer) component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub free_rank: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub hamiltonian: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<String>,
    /// Socle coordinate selectors for the cocycle in `thm32` specs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d0_bits: Option<Vec<u8>>,
}

fn is_zero_u32(n: &u32) -> bool {
    *n == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitSpec {
    pub p: u64,
    pub t: i64,
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub units: Vec<UnitSpec>,
    /// `"inversion"` or `"identity"`: the global-sign form used for
    /// non-periodic bases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
    /// Inner part on a Hamiltonian base: `"1"`, `"i"`, `"j"`, or `"k"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q8: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TopSpec {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub infinite: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    /// Torsion coordinates of the cocycle `g^m = d0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct QSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_bound: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CapsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecFile {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<TopSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<QSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapsSpec>,
}

impl GroupSpecFile {
    /// Parses and canonicalizes: components sorted, negative `t` values
    /// normalized to residues at the stated precision.
    pub fn parse(text: &str) -> Result<GroupSpecFile, String> {
        let mut spec: GroupSpecFile =
            toml::from_str(text).map_err(|e| format!("parse error: {e}"))?;
        spec.canonicalize()?;
        Ok(spec)
    }

    pub fn to_canonical_string(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    fn canonicalize(&mut self) -> Result<(), String> {
        for comps in [
            self.base.as_mut().map(|b| &mut b.components),
            self.q.as_mut().map(|q| &mut q.components),
        ]
        .into_iter()
        .flatten()
        {
            let mut parsed: Vec<(u64, Option<u32>)> =
                comps.iter().map(|c| parse_component(c)).collect::<Result<_, _>>()?;
            parsed.sort();
            *comps = parsed
                .into_iter()
                .map(|(p, e)| match e {
                    Some(e) => format!("{p}^{e}"),
                    None => format!("{p}^inf"),
                })
                .collect();
        }
        if let Some(action) = &mut self.action {
            for u in &mut action.units {
                let unit = PadicUnit::new(u.p, u.precision, u.t).map_err(|e| e.to_string())?;
                u.t = unit.residue() as i64;
            }
            action.units.sort_by_key(|u| u.p);
        }
        Ok(())
    }

    fn base_spec(&self) -> Result<&BaseSpec, String> {
        self.base.as_ref().ok_or_else(|| "missing [base]".to_string())
    }

    pub fn order_cap(&self) -> u64 {
        self.caps
            .as_ref()
            .and_then(|c| c.order)
            .unwrap_or(DEFAULT_ORDER_CAP)
    }

    pub fn default_level(&self) -> u32 {
        self.caps.as_ref().and_then(|c| c.level).unwrap_or(4)
    }

    pub fn k_max(&self) -> i64 {
        self.window.as_ref().and_then(|w| w.k_max).unwrap_or(3)
    }

    pub fn free_bound(&self) -> i64 {
        self.window.as_ref().and_then(|w| w.free_bound).unwrap_or(2)
    }

    /// The per-prime component lists with quasicyclic markers.
    fn quasi_spec(&self) -> Result<QuasiSpec, String> {
        let mut by_prime: BTreeMap<u64, Vec<QuasiComp>> = BTreeMap::new();
        for c in &self.base_spec()?.components {
            let (p, e) = parse_component(c)?;
            by_prime.entry(p).or_default().push(match e {
                Some(e) => QuasiComp::Finite(e),
                None => QuasiComp::Quasicyclic,
            });
        }
        QuasiSpec::new(by_prime.into_iter().collect()).map_err(|e| e.to_string())
    }

    fn finite_components(comps: &[String]) -> Result<Vec<(u64, u32)>, String> {
        comps
            .iter()
            .map(|c| match parse_component(c)? {
                (p, Some(e)) => Ok((p, e)),
                (p, None) => Err(format!("{p}^inf requires a truncation level")),
            })
            .collect()
    }

    pub fn action_pauto(&self) -> Result<PowerAut, String> {
        let action = self.action.clone().unwrap_or_default();
        if let Some(sign) = &action.sign {
            if !action.units.is_empty() || action.q8.is_some() {
                return Err("sign excludes units and q8".into());
            }
            return match sign.as_str() {
                "inversion" => Ok(PowerAut::inversion()),
                "identity" => Ok(PowerAut::Inversion { invert: false }),
                other => Err(format!("unknown sign {other:?}")),
            };
        }
        let mut units = BTreeMap::new();
        for u in &action.units {
            units.insert(
                u.p,
                PadicUnit::new(u.p, u.precision, u.t).map_err(|e| e.to_string())?,
            );
        }
        let q8 = match action.q8.as_deref() {
            None => Q8Element::One,
            Some(s) => Q8Element::from_symbol(s).ok_or_else(|| format!("unknown q8 {s:?}"))?,
        };
        Ok(PowerAut::with_q8(units, q8))
    }

    /// The base as a Dedekind group, materializing quasicyclic components at
    /// `level`.
    pub fn build_base(&self, level: u32) -> Result<DedekindGroup, String> {
        let base = self.base_spec()?;
        if base.free_rank > 0 {
            let torsion = FinAbelian::with_cap(
                Self::finite_components(&base.components)?,
                self.order_cap(),
            )
            .map_err(|e| e.to_string())?;
            return Ok(DedekindGroup::Abelian(FgAbelian {
                free_rank: base.free_rank,
                torsion,
            }));
        }
        let torsion = self
            .quasi_spec()?
            .materialize(level, self.order_cap())
            .map_err(|e| e.to_string())?;
        if base.hamiltonian {
            let (elem2, odd): (Vec<_>, Vec<_>) = torsion
                .components()
                .iter()
                .cloned()
                .partition(|&(p, _)| p == 2);
            DedekindGroup::hamiltonian(
                FinAbelian::new(elem2).map_err(|e| e.to_string())?,
                FinAbelian::new(odd).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())
        } else {
            Ok(DedekindGroup::abelian_finite(torsion))
        }
    }

    pub fn thm32_spec(&self) -> Result<Thm32Spec, String> {
        let base = self.base_spec()?;
        let a = self.quasi_spec()?;
        let d0_bits = base
            .d0_bits
            .clone()
            .unwrap_or_else(|| vec![0; base.components.len()]);
        let q = FinAbelian::with_cap(
            Self::finite_components(&self.q.clone().unwrap_or_default().components)?,
            self.order_cap(),
        )
        .map_err(|e| e.to_string())?;
        Ok(Thm32Spec { a, d0_bits, q })
    }

    pub fn thm36_spec(&self) -> Result<Thm36Spec, String> {
        let base = self.base_spec()?;
        let mut by_prime: BTreeMap<u64, Vec<QuasiComp>> = BTreeMap::new();
        for c in &base.components {
            let (p, e) = parse_component(c)?;
            by_prime.entry(p).or_default().push(match e {
                Some(e) => QuasiComp::Finite(e),
                None => QuasiComp::Quasicyclic,
            });
        }
        let two = by_prime.remove(&2);
        let two_part = if base.hamiltonian {
            let rank = two.map(|v| v.len() as u32).unwrap_or(0);
            TwoPart::Hamiltonian { elem2_rank: rank }
        } else {
            match two {
                Some(comps) => TwoPart::Abelian(comps),
                None => TwoPart::None,
            }
        };
        Ok(Thm36Spec {
            two_part,
            odd: by_prime.into_iter().collect(),
            action: self.action_pauto()?,
        })
    }

    /// A finite (or infinite-top over finite base) extension instance at the
    /// given truncation level.
    pub fn build_extension(&self, level: u32) -> Result<CyclicExtension, String> {
        match self.kind {
            Kind::FiniteAbelian | Kind::Dedekind => {
                Err("spec describes a base group, not an extension".into())
            }
            Kind::CyclicExtension => {
                let base = self.build_base(level)?;
                let top_spec = self.top.clone().unwrap_or_default();
                let top = if top_spec.infinite {
                    Top::Infinite
                } else {
                    let order = top_spec.order.ok_or("top requires infinite or order")?;
                    let coords = top_spec
                        .cocycle
                        .unwrap_or_else(|| vec![0; base.torsion().components().len()]);
                    Top::Finite {
                        order,
                        cocycle: base.torsion_element(coords).map_err(|e| e.to_string())?,
                    }
                };
                CyclicExtension::new(base, top, self.action_pauto()?).map_err(|e| e.to_string())
            }
            Kind::Thm32 => fci_core::verify::build_thm32(&self.thm32_spec()?, level, self.order_cap())
                .map_err(|e| e.to_string()),
            Kind::Thm36 => fci_core::verify::build_thm36(&self.thm36_spec()?, level, self.order_cap())
                .map_err(|e| e.to_string()),
            Kind::Thm43 => {
                let base = self.base_spec()?;
                let torsion = FinAbelian::with_cap(
                    Self::finite_components(&base.components)?,
                    self.order_cap(),
                )
                .map_err(|e| e.to_string())?;
                let a = FgAbelian { free_rank: base.free_rank, torsion };
                let coords = self
                    .top
                    .clone()
                    .unwrap_or_default()
                    .cocycle
                    .unwrap_or_else(|| vec![0; a.torsion.components().len()]);
                let d0 = a
                    .element(vec![0; a.free_rank as usize], coords)
                    .map_err(|e| e.to_string())?;
                fg_abelian_extension(a, d0).map_err(|e| e.to_string())
            }
        }
    }
}

fn parse_component(s: &str) -> Result<(u64, Option<u32>), String> {
    let (p, e) = s
        .split_once('^')
        .ok_or_else(|| format!("component {s:?} must look like \"p^e\" or \"p^inf\""))?;
    let p: u64 = p.parse().map_err(|_| format!("bad prime in {s:?}"))?;
    if e == "inf" {
        return Ok((p, None));
    }
    let e: u32 = e.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
    Ok((p, Some(e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
kind = "thm36"

[base]
components = ["3^inf", "2^2"]

[action]
units = [{ p = 3, t = -1, precision = 4 }, { p = 2, t = 1, precision = 4 }]
"#;

    #[test]
    fn canonical_round_trip() {
        let spec = GroupSpecFile::parse(SAMPLE).unwrap();
        let text = spec.to_canonical_string();
        let reparsed = GroupSpecFile::parse(&text).unwrap();
        assert_eq!(spec, reparsed);
        assert_eq!(text, reparsed.to_canonical_string());
        // components sorted, negative t normalized: -1 = 80 mod 3^4
        assert_eq!(spec.base.as_ref().unwrap().components, vec!["2^2", "3^inf"]);
        assert_eq!(spec.action.as_ref().unwrap().units[1].t, 80);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(GroupSpecFile::parse("kind = \"thm36\"\nbogus = 1").is_err());
    }

    #[test]
    fn builds_extension() {
        let spec = GroupSpecFile::parse(SAMPLE).unwrap();
        let g = spec.build_extension(2).unwrap();
        assert_eq!(g.base().order(), Some(9 * 4));
    }
}
