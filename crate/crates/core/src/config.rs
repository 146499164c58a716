//! JSON constructor configs and the build artifact written by the CLI.

use serde::{Deserialize, Serialize};

use crate::algebra::{ga_check_involution, ga_check_kind, ga_is_torus, GradedAlgebra, InvolutionMap, Key, Kind};
use crate::constructors::{clifford_torus, octonion_torus, quantum_torus, rationals, reversal_involution, CliffordData, CocycleMatrix};
use crate::error::{Error, Result};
use crate::group::{GroupSpec, Window};
use crate::report::Report;
use crate::scalar::Rat;
use crate::sp::{build_sp, check_rank_kind, SpLie, SpMode, TableLie};

pub const ARTIFACT_FORMAT: &str = "sptorus-artifact/1";

/// Which coordinate algebra to construct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraConfig {
    Rationals,
    Quantum {
        group: GroupSpec,
        q: Vec<Vec<Rat>>,
        /// Per-generator signs of the reversal involution; all `+1` if absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        signs: Option<Vec<i64>>,
    },
    Octonion {
        n: usize,
    },
    Clifford {
        group: GroupSpec,
        plus_subgroup: Vec<Vec<i64>>,
        module: Vec<Vec<i64>>,
        form: Vec<Vec<Rat>>,
    },
}

/// A constructor config plus the optional rank of `sp₂ᵣ` and degree window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    #[serde(flatten)]
    pub algebra: AlgebraConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Runs the constructor. `window` bounds the torus check of Clifford
    /// data over an infinite group.
    pub fn instantiate(&self, window: Option<&Window>) -> Result<(GradedAlgebra, InvolutionMap)> {
        let (alg, sigma) = match &self.algebra {
            AlgebraConfig::Rationals => (rationals(), InvolutionMap::identity()),
            AlgebraConfig::Quantum { group, q, signs } => {
                let q = CocycleMatrix(q.iter().map(|row| row.iter().map(|c| c.0.clone()).collect()).collect());
                let alg = quantum_torus(group, &q)?;
                let signs = signs.clone().unwrap_or_else(|| vec![1; group.len()]);
                let sigma = reversal_involution(&alg, &q, &signs)?;
                (alg, sigma)
            }
            AlgebraConfig::Octonion { n } => octonion_torus(*n)?,
            AlgebraConfig::Clifford { group, plus_subgroup, module, form } => {
                let el = |v: &Vec<i64>| group.element(v);
                let data = CliffordData {
                    plus_subgroup: plus_subgroup.iter().map(el).collect::<Result<_>>()?,
                    module_degrees: module.iter().map(el).collect::<Result<_>>()?,
                    form: form.iter().map(|row| row.iter().map(|c| c.0.clone()).collect()).collect(),
                };
                clifford_torus(group, &data, true, window)?
            }
        };
        let origin = serde_json::to_value(self).map_err(|e| Error::Config(e.to_string()))?;
        Ok((alg.with_origin(origin), sigma))
    }

    /// `window` if given, else the config's own; `WindowRequired` for an
    /// infinite group with neither.
    pub fn resolve_window(&self, window: Option<Window>, spec: &GroupSpec) -> Result<Option<Window>> {
        if spec.is_finite() {
            return Ok(None);
        }
        window.or(self.window).map(Some).ok_or(Error::WindowRequired)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductLine {
    pub x: Key,
    pub y: Key,
    pub result: Vec<(Key, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageLine {
    pub x: Key,
    pub image: Vec<(Key, Rat)>,
}

/// Structure constants of the coordinate algebra on a basis (the whole
/// algebra for a finite group, the window otherwise). Products leaving the
/// window are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraTable {
    pub kind: Kind,
    pub spec: GroupSpec,
    pub basis: Vec<Key>,
    pub unit: Vec<(Key, Rat)>,
    pub products: Vec<ProductLine>,
    pub involution: Vec<ImageLine>,
}

fn rat_terms(x: crate::algebra::Elem) -> Vec<(Key, Rat)> {
    x.into_iter().map(|(k, c)| (k, Rat(c))).collect()
}

impl AlgebraTable {
    pub fn tabulate(alg: &GradedAlgebra, sigma: &InvolutionMap, window: Option<&Window>) -> Result<AlgebraTable> {
        let basis = alg.basis(window)?;
        let mut products = Vec::new();
        for x in &basis {
            for y in &basis {
                let p = alg.mul_keys(x, y);
                if !p.is_empty() {
                    products.push(ProductLine { x: x.clone(), y: y.clone(), result: rat_terms(p) });
                }
            }
        }
        let involution = basis.iter().map(|x| ImageLine { x: x.clone(), image: rat_terms(sigma.apply_key(x)) }).collect();
        let unit = rat_terms(alg.unit().ok_or(Error::NoUnit)?);
        Ok(AlgebraTable { kind: alg.kind, spec: alg.spec().clone(), basis, unit, products, involution })
    }
}

/// Everything `build` writes: the config it came from, the coordinate table
/// and, for a finite group with a rank, every bracket of `sp₂ᵣ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Artifact {
    pub format: String,
    pub config: Config,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    pub algebra: AlgebraTable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie: Option<TableLie>,
}

impl Artifact {
    pub fn build(config: &Config, window: Option<Window>) -> Result<Artifact> {
        let probe = config.window.or(window);
        let (alg, sigma) = config.instantiate(probe.as_ref())?;
        let window = config.resolve_window(window, alg.spec())?;
        let algebra = AlgebraTable::tabulate(&alg, &sigma, window.as_ref())?;
        let lie = match config.rank {
            Some(r) if window.is_none() => Some(TableLie::materialize(&build_sp(&alg, &sigma, r, SpMode::Full)?)?),
            Some(r) => {
                check_rank_kind(&alg, &sigma, r, window.as_ref())?;
                None
            }
            None => None,
        };
        Ok(Artifact { format: ARTIFACT_FORMAT.into(), config: config.clone(), window, algebra, lie })
    }

    pub fn from_json(text: &str) -> Result<Artifact> {
        let a: Artifact = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if a.format != ARTIFACT_FORMAT {
            return Err(Error::Config(format!("unknown artifact format {:?}", a.format)));
        }
        Ok(a)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// The stored coordinate table as an algebra, with its involution.
    /// Only meaningful for a finite group, where the table is complete.
    pub fn stored_algebra(&self) -> Result<(GradedAlgebra, InvolutionMap)> {
        let t = &self.algebra;
        let table = t.products.iter().map(|l| ((l.x.clone(), l.y.clone()), terms(&l.result))).collect();
        let rule = crate::algebra::TableRule::new(t.spec.clone(), t.basis.clone(), table, Some(terms(&t.unit)))?;
        let sigma = InvolutionMap::from_table(t.involution.iter().map(|l| (l.x.clone(), terms(&l.image))).collect());
        Ok((GradedAlgebra::new(std::sync::Arc::new(rule), t.kind), sigma))
    }

    /// `sp₂ᵣ` rebuilt from the config: the full algebra for a finite group,
    /// restricted to `window` otherwise. Construction is verified.
    pub fn rebuild_lie(&self, window: Option<Window>) -> Result<SpLie> {
        let r = self.rank()?;
        let (alg, sigma) = self.config.instantiate(window.as_ref().or(self.window.as_ref()))?;
        let mode = match self.config.resolve_window(window, alg.spec())? {
            None => SpMode::Full,
            Some(w) => SpMode::Window(w),
        };
        build_sp(&alg, &sigma, r, mode)
    }

    pub fn rank(&self) -> Result<usize> {
        self.config.rank.ok_or_else(|| Error::Config("artifact has no rank; rebuild with \"rank\" in the config".into()))
    }

    /// Kind, involution and torus checks: on the stored table for a finite
    /// group, on the constructed algebra over the window otherwise. Either
    /// way the table is compared with a fresh tabulation.
    pub fn algebra_checks(&self) -> Result<Report> {
        let w = self.window;
        let (fresh, fresh_sigma) = self.config.instantiate(w.as_ref())?;
        let (alg, sigma) = if w.is_none() { self.stored_algebra()? } else { (fresh.clone(), fresh_sigma.clone()) };
        let mut rep = ga_check_kind(&alg, alg.kind, w.as_ref())?;
        rep.extend(ga_check_involution(&alg, &sigma, w.as_ref())?);
        rep.push(ga_is_torus(&alg, alg.kind, w.as_ref())?);
        let expect = AlgebraTable::tabulate(&fresh, &fresh_sigma, w.as_ref())?;
        rep.push(crate::report::Check::from_bool("stored table matches its constructor", expect == self.algebra, || {
            first_difference(&expect, &self.algebra)
        }));
        Ok(rep.prefixed("algebra: "))
    }
}

fn terms(v: &[(Key, Rat)]) -> crate::algebra::Elem {
    v.iter().map(|(k, c)| (k.clone(), c.0.clone())).collect()
}

fn first_difference(want: &AlgebraTable, got: &AlgebraTable) -> String {
    if want.basis != got.basis {
        return "basis differs".into();
    }
    for (a, b) in want.products.iter().zip(&got.products) {
        if a != b {
            return format!("product {}·{} differs", a.x, a.y);
        }
    }
    if want.products.len() != got.products.len() {
        return "number of nonzero products differs".into();
    }
    "involution differs".into()
}
