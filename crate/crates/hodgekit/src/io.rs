//! JSON schemas shared between the library and the command line tool.
//!
//! Scalars travel as strings (`"a/b"`, `"a/b+c/d*i"`), matrices as
//! row-major grids of such strings, filtrations as maps from the index
//! (as a decimal string key) to a list of spanning rows.  Schema
//! violations name the offending field path.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::admissibility::poly::Poly;
use crate::admissibility::LocalModel1D;
use crate::domains::{FundamentalSetDescriptor, HodgeNumbers, PeriodDomainSpec, StripData};
use crate::error::{Error, Result};
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::matrix::Matrix;
use crate::mhs::{GradedPolarization, MixedHodgeStructure};
use crate::monodromy::NilpotentOperator;
use crate::scalar::{format_rational, parse_gaussian, parse_rational, GaussianRational, Rational};
use crate::subspace::Subspace;

pub type StringGrid = Vec<Vec<String>>;
pub type FiltrationMap = BTreeMap<String, StringGrid>;

/// `mhs.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MhsFile {
    pub rank: usize,
    pub weight: FiltrationMap,
    pub hodge: FiltrationMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarizations: Option<FiltrationMap>,
}

/// `model1d.json`: polynomial entries as coefficient lists, constant first.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Model1dFile {
    pub rank: usize,
    pub weight: FiltrationMap,
    pub polarizations: FiltrationMap,
    pub n: StringGrid,
    pub psi: BTreeMap<String, Vec<Vec<Vec<String>>>>,
}

/// Domain spec for `membership` and `hodge`: Hodge numbers keyed `"p,q"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DomainSpecFile {
    pub rank: usize,
    pub weight: FiltrationMap,
    pub hodge_numbers: BTreeMap<String, usize>,
    pub polarizations: FiltrationMap,
}

/// Standalone filtration file (the `membership` point argument).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiltrationFile {
    pub rank: usize,
    pub hodge: FiltrationMap,
}

/// Input of the `relwt` verb: a nilpotent operator against a weight
/// filtration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelwtFile {
    pub rank: usize,
    pub weight: FiltrationMap,
    pub n: StringGrid,
}

impl RelwtFile {
    pub fn to_parts(&self) -> Result<(NilpotentOperator, IncreasingFiltration)> {
        let weight = weight_from_map(self.rank, &self.weight, "weight")?;
        let n = grid_to_matrix(&self.n, "n")?;
        let n = NilpotentOperator::new(n).map_err(|e| Error::Parse(format!("n: {e}")))?;
        Ok((n, weight))
    }
}

/// Input of the `limit` verb: orbit data `(F0, N, W)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitFile {
    pub rank: usize,
    pub weight: FiltrationMap,
    pub n: StringGrid,
    pub f0: FiltrationMap,
}

impl LimitFile {
    pub fn to_parts(
        &self,
    ) -> Result<(
        DecreasingFiltration,
        NilpotentOperator,
        IncreasingFiltration,
    )> {
        let weight = weight_from_map(self.rank, &self.weight, "weight")?;
        let n = grid_to_matrix(&self.n, "n")?;
        let n = NilpotentOperator::new(n).map_err(|e| Error::Parse(format!("n: {e}")))?;
        let f0 = hodge_from_map(self.rank, &self.f0, "f0")?;
        Ok((f0, n, weight))
    }
}

/// Fundamental set descriptors, tagged by `kind`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DescriptorFile {
    #[serde(rename = "strip")]
    Strip {
        slope: String,
        anchor: String,
        width: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        floor: Option<String>,
    },
    #[serde(rename = "strip-union")]
    StripUnion { strips: Vec<StripFile> },
    #[serde(rename = "product")]
    Product {
        box_min: Vec<String>,
        box_max: Vec<String>,
    },
    #[serde(rename = "half-plane-domain")]
    HalfPlaneDomain { epsilon: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StripFile {
    pub slope: String,
    pub anchor: String,
    pub width: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<String>,
}

pub fn parse_scalar_at(s: &str, path: &str) -> Result<GaussianRational> {
    parse_gaussian(s).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn parse_rational_at(s: &str, path: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn parse_index(key: &str, path: &str) -> Result<i64> {
    i64::from_str(key).map_err(|_| Error::Parse(format!("{path}: bad index `{key}`")))
}

pub fn grid_to_matrix(grid: &StringGrid, path: &str) -> Result<Matrix> {
    let mut rows = Vec::with_capacity(grid.len());
    for (i, row) in grid.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, s) in row.iter().enumerate() {
            out.push(parse_scalar_at(s, &format!("{path}[{i}][{j}]"))?);
        }
        rows.push(out);
    }
    Matrix::from_rows(rows).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn matrix_to_grid(m: &Matrix) -> StringGrid {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| x.to_string()).collect())
        .collect()
}

fn grid_to_subspace(rank: usize, grid: &StringGrid, path: &str) -> Result<Subspace> {
    let mut rows = Vec::with_capacity(grid.len());
    for (i, row) in grid.iter().enumerate() {
        if row.len() != rank {
            return Err(Error::Parse(format!(
                "{path}[{i}]: row has {} entries, rank is {rank}",
                row.len()
            )));
        }
        let mut out = Vec::with_capacity(rank);
        for (j, s) in row.iter().enumerate() {
            out.push(parse_scalar_at(s, &format!("{path}[{i}][{j}]"))?);
        }
        rows.push(out);
    }
    Subspace::span(rank, &rows).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn weight_from_map(
    rank: usize,
    map: &FiltrationMap,
    path: &str,
) -> Result<IncreasingFiltration> {
    let mut steps = Vec::new();
    for (key, grid) in map {
        let k = parse_index(key, path)?;
        steps.push((k, grid_to_subspace(rank, grid, &format!("{path}.{key}"))?));
    }
    IncreasingFiltration::new(rank, steps).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn hodge_from_map(
    rank: usize,
    map: &FiltrationMap,
    path: &str,
) -> Result<DecreasingFiltration> {
    let mut steps = Vec::new();
    for (key, grid) in map {
        let p = parse_index(key, path)?;
        steps.push((p, grid_to_subspace(rank, grid, &format!("{path}.{key}"))?));
    }
    DecreasingFiltration::new(rank, steps).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn polarizations_from_map(map: &FiltrationMap, path: &str) -> Result<GradedPolarization> {
    let mut forms = BTreeMap::new();
    for (key, grid) in map {
        let k = parse_index(key, path)?;
        forms.insert(k, grid_to_matrix(grid, &format!("{path}.{key}"))?);
    }
    GradedPolarization::new(forms).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn weight_to_map(w: &IncreasingFiltration) -> FiltrationMap {
    w.jumps()
        .iter()
        .map(|(k, s)| (k.to_string(), matrix_to_grid(s.basis())))
        .collect()
}

pub fn hodge_to_map(f: &DecreasingFiltration) -> FiltrationMap {
    f.jumps()
        .iter()
        .map(|(p, s)| (p.to_string(), matrix_to_grid(s.basis())))
        .collect()
}

impl MhsFile {
    pub fn to_mhs(&self) -> Result<MixedHodgeStructure> {
        let weight = weight_from_map(self.rank, &self.weight, "weight")?;
        let hodge = hodge_from_map(self.rank, &self.hodge, "hodge")?;
        MixedHodgeStructure::new(self.rank, weight, hodge)
    }

    /// Parse only the filtration data, without the mixed Hodge axioms.
    pub fn to_raw(&self) -> Result<(usize, IncreasingFiltration, DecreasingFiltration)> {
        let weight = weight_from_map(self.rank, &self.weight, "weight")?;
        let hodge = hodge_from_map(self.rank, &self.hodge, "hodge")?;
        Ok((self.rank, weight, hodge))
    }

    pub fn to_polarizations(&self) -> Result<Option<GradedPolarization>> {
        match &self.polarizations {
            Some(map) => Ok(Some(polarizations_from_map(map, "polarizations")?)),
            None => Ok(None),
        }
    }

    pub fn from_mhs(v: &MixedHodgeStructure) -> Self {
        MhsFile {
            rank: v.rank(),
            weight: weight_to_map(v.weight()),
            hodge: hodge_to_map(v.hodge()),
            polarizations: None,
        }
    }
}

impl Model1dFile {
    pub fn to_model(&self) -> Result<LocalModel1D> {
        let weight = weight_from_map(self.rank, &self.weight, "weight")?;
        let polarizations = polarizations_from_map(&self.polarizations, "polarizations")?;
        let n = grid_to_matrix(&self.n, "n")?;
        let n = NilpotentOperator::new(n).map_err(|e| Error::Parse(format!("n: {e}")))?;
        let mut psi = BTreeMap::new();
        for (key, rows) in &self.psi {
            let p = parse_index(key, "psi")?;
            let mut out_rows = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                if row.len() != self.rank {
                    return Err(Error::Parse(format!(
                        "psi.{key}[{i}]: row has {} entries, rank is {}",
                        row.len(),
                        self.rank
                    )));
                }
                let mut out_row = Vec::with_capacity(row.len());
                for (j, coeffs) in row.iter().enumerate() {
                    let mut cs = Vec::with_capacity(coeffs.len());
                    for (t, c) in coeffs.iter().enumerate() {
                        cs.push(parse_scalar_at(c, &format!("psi.{key}[{i}][{j}][{t}]"))?);
                    }
                    out_row.push(Poly::new(cs));
                }
                out_rows.push(out_row);
            }
            psi.insert(p, out_rows);
        }
        LocalModel1D::new(self.rank, weight, polarizations, n, psi)
    }
}

impl DomainSpecFile {
    pub fn to_spec(&self) -> Result<PeriodDomainSpec> {
        let weight = weight_from_map(self.rank, &self.weight, "weight")?;
        let polarizations = polarizations_from_map(&self.polarizations, "polarizations")?;
        let mut counts = BTreeMap::new();
        for (key, h) in &self.hodge_numbers {
            let Some((p, q)) = key.split_once(',') else {
                return Err(Error::Parse(format!("hodge_numbers: bad key `{key}`")));
            };
            let p = parse_index(p.trim(), "hodge_numbers")?;
            let q = parse_index(q.trim(), "hodge_numbers")?;
            counts.insert((p, q), *h);
        }
        let numbers =
            HodgeNumbers::new(counts).map_err(|e| Error::Parse(format!("hodge_numbers: {e}")))?;
        PeriodDomainSpec::new(self.rank, weight, numbers, polarizations)
    }
}

impl FiltrationFile {
    pub fn to_filtration(&self) -> Result<DecreasingFiltration> {
        hodge_from_map(self.rank, &self.hodge, "hodge")
    }
}

impl DescriptorFile {
    pub fn to_descriptor(&self) -> Result<FundamentalSetDescriptor> {
        match self {
            DescriptorFile::Strip {
                slope,
                anchor,
                width,
                floor,
            } => Ok(FundamentalSetDescriptor::Strip(strip_data(
                slope, anchor, width, floor,
            )?)),
            DescriptorFile::StripUnion { strips } => {
                let strips = strips
                    .iter()
                    .map(|s| strip_data(&s.slope, &s.anchor, &s.width, &s.floor))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FundamentalSetDescriptor::StripUnion(strips))
            }
            DescriptorFile::Product { box_min, box_max } => {
                let lo = box_min
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_rational_at(s, &format!("box_min[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let hi = box_max
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_rational_at(s, &format!("box_max[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FundamentalSetDescriptor::Product {
                    box_min: lo,
                    box_max: hi,
                })
            }
            DescriptorFile::HalfPlaneDomain { epsilon } => {
                Ok(FundamentalSetDescriptor::HalfPlaneDomain {
                    epsilon: parse_rational_at(epsilon, "epsilon")?,
                })
            }
        }
    }
}

fn strip_data(slope: &str, anchor: &str, width: &str, floor: &Option<String>) -> Result<StripData> {
    Ok(StripData {
        slope: parse_rational_at(slope, "slope")?,
        anchor: parse_rational_at(anchor, "anchor")?,
        width: parse_rational_at(width, "width")?,
        floor: match floor {
            Some(f) => Some(parse_rational_at(f, "floor")?),
            None => None,
        },
    })
}

/// Render an integer vector for reports.
pub fn int_vec_to_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Render a rational for reports, canonical `"a/b"`.
pub fn rational_to_string(r: &Rational) -> String {
    format_rational(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    const KUMMER_I: &str = r#"{
        "rank": 2,
        "weight": { "-2": [["0/1", "1/1"]], "0": [["1/1", "0/1"], ["0/1", "1/1"]] },
        "hodge": { "0": [["1/1", "0/1+1/1*i"]] },
        "polarizations": { "-2": [["1/1"]], "0": [["1/1"]] }
    }"#;

    #[test]
    fn kummer_round_trip() {
        let file: MhsFile = serde_json::from_str(KUMMER_I).unwrap();
        let v = file.to_mhs().unwrap();
        assert_eq!(v.rank(), 2);
        let pol = file.to_polarizations().unwrap().unwrap();
        assert!(
            crate::mhs::check_graded_polarization(&v, &pol)
                .unwrap()
                .polarized
        );
        // Serialization re-parses to the same structure.
        let out = MhsFile::from_mhs(&v);
        let text = serde_json::to_string(&out).unwrap();
        let again: MhsFile = serde_json::from_str(&text).unwrap();
        assert_eq!(again.to_mhs().unwrap(), v);
    }

    #[test]
    fn errors_carry_field_paths() {
        let bad = KUMMER_I.replace("\"1/1\", \"0/1+1/1*i\"", "\"1/0\", \"0/1\"");
        let file: MhsFile = serde_json::from_str(&bad).unwrap();
        let err = file.to_mhs().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("hodge.0[0][0]"), "{msg}");
    }

    #[test]
    fn descriptor_kinds_parse() {
        let strip: DescriptorFile = serde_json::from_str(
            r#"{"kind": "strip", "slope": "0/1", "anchor": "0/1", "width": "6/5"}"#,
        )
        .unwrap();
        assert!(matches!(
            strip.to_descriptor().unwrap(),
            FundamentalSetDescriptor::Strip(_)
        ));
        let dom: DescriptorFile =
            serde_json::from_str(r#"{"kind": "half-plane-domain", "epsilon": "1/10"}"#).unwrap();
        assert!(matches!(
            dom.to_descriptor().unwrap(),
            FundamentalSetDescriptor::HalfPlaneDomain { .. }
        ));
    }
}
