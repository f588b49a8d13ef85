//! Problem files: schema, loading and validation.

use std::path::Path;

use serde::{Deserialize, Serialize};
use structlmi::matops::from_rows;
use structlmi::{
    basis_from_mask, coordinated_basis, decentralized_mask, BlockPartition, Mat, Plant,
    StructureBasis, ZeroPatternMask,
};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub type Matrix = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub name: String,
    pub a: Matrix,
    pub b: Matrix,
    /// Disturbance input; carried for simulation tools, ignored here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Matrix>,
    pub structure: StructureSpec,
    #[serde(default)]
    pub options: ProblemOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StructureSpec {
    Mask { mask: Vec<Vec<u8>> },
    Decentralized { state_dims: Vec<usize>, input_dims: Vec<usize> },
    Coordinated { state_dims: Vec<usize>, input_dims: Vec<usize> },
    Basis { matrices: Vec<Matrix> },
}

impl StructureSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            StructureSpec::Mask { .. } => "mask",
            StructureSpec::Decentralized { .. } => "decentralized",
            StructureSpec::Coordinated { .. } => "coordinated",
            StructureSpec::Basis { .. } => "basis",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Main,
    Prop1,
    Blanchini,
    All,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodChoice>,
}

/// A validated problem: plant, target subspace and the pieces each
/// method needs.
#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub plant: Plant,
    pub basis: StructureBasis,
    /// Present for decentralized structures.
    pub partition: Option<BlockPartition>,
    /// Pattern for the Lyapunov matrix in the change-of-variables baseline.
    pub p_pattern: ZeroPatternMask,
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "<root>".to_string() } else { path };
        CliError::Schema { path, message: e.into_inner().to_string() }
    })
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

/// Mirror of [`ProblemFile`] with the structure left unparsed.
///
/// Internally tagged enums are buffered by serde, which drops the error path
/// inside them; parsing the structure on its own keeps it.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblemFile {
    schema_version: u32,
    name: String,
    a: Matrix,
    b: Matrix,
    #[serde(default)]
    w: Option<Matrix>,
    structure: serde_json::Value,
    #[serde(default)]
    options: ProblemOptions,
}

/// Externally tagged twin of [`StructureSpec`], used only for parsing.
#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum TaggedSpec {
    Mask { mask: Vec<Vec<u8>> },
    Decentralized { state_dims: Vec<usize>, input_dims: Vec<usize> },
    Coordinated { state_dims: Vec<usize>, input_dims: Vec<usize> },
    Basis { matrices: Vec<Matrix> },
}

impl From<TaggedSpec> for StructureSpec {
    fn from(t: TaggedSpec) -> Self {
        match t {
            TaggedSpec::Mask { mask } => StructureSpec::Mask { mask },
            TaggedSpec::Decentralized { state_dims, input_dims } => {
                StructureSpec::Decentralized { state_dims, input_dims }
            }
            TaggedSpec::Coordinated { state_dims, input_dims } => StructureSpec::Coordinated { state_dims, input_dims },
            TaggedSpec::Basis { matrices } => StructureSpec::Basis { matrices },
        }
    }
}

fn parse_structure(value: serde_json::Value) -> Result<StructureSpec, CliError> {
    let serde_json::Value::Object(mut fields) = value else {
        return Err(schema("structure", "expected an object"));
    };
    let tag = match fields.remove("type") {
        Some(serde_json::Value::String(t)) => t,
        Some(_) => return Err(schema("structure.type", "expected a string")),
        None => return Err(schema("structure.type", "missing field `type`")),
    };
    let wrapped = serde_json::Value::Object([(tag, serde_json::Value::Object(fields))].into_iter().collect());
    let spec: TaggedSpec = serde_path_to_error::deserialize(wrapped).map_err(|e| {
        // drop the leading variant segment of the path
        let inner = e.path().to_string();
        let path = match inner.split_once('.') {
            Some((_, rest)) if !rest.is_empty() => format!("structure.{rest}"),
            _ => "structure.type".to_string(),
        };
        schema(path, e.into_inner().to_string())
    })?;
    Ok(spec.into())
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, CliError> {
    let raw: RawProblemFile = parse_json(text)?;
    Ok(ProblemFile {
        schema_version: raw.schema_version,
        name: raw.name,
        a: raw.a,
        b: raw.b,
        w: raw.w,
        structure: parse_structure(raw.structure)?,
        options: raw.options,
    })
}

pub fn load_problem(path: &Path) -> Result<Problem, CliError> {
    Problem::from_file(parse_problem(&read_file(path)?)?)
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Schema { path: path.into(), message: message.into() }
}

/// Rectangular, non-empty, finite.
pub fn matrix(path: &str, rows: &Matrix) -> Result<Mat, CliError> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(schema(path, "matrix must be non-empty"));
    }
    let cols = rows[0].len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(schema(format!("{path}[{i}]"), format!("row has {} entries, expected {cols}", r.len())));
        }
    }
    from_rows(rows).map_err(|e| schema(path, e.to_string()))
}

fn dims(path: &str, dims: &[usize], total: usize, what: &str) -> Result<(), CliError> {
    if dims.is_empty() {
        return Err(schema(path, "needs at least one block"));
    }
    if let Some(i) = dims.iter().position(|&d| d == 0) {
        return Err(schema(format!("{path}[{i}]"), "block size must be positive"));
    }
    let sum: usize = dims.iter().sum();
    if sum != total {
        return Err(schema(path, format!("block sizes sum to {sum}, expected {total} ({what})")));
    }
    Ok(())
}

impl Problem {
    pub fn from_file(file: ProblemFile) -> Result<Self, CliError> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(schema(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", file.schema_version),
            ));
        }
        let a = matrix("a", &file.a)?;
        if !a.is_square() {
            return Err(schema("a", format!("must be square, got {}x{}", a.nrows(), a.ncols())));
        }
        let b = matrix("b", &file.b)?;
        let n = a.nrows();
        if b.nrows() != n {
            return Err(schema("b", format!("has {} rows, expected {n} (the order of a)", b.nrows())));
        }
        let m = b.ncols();
        if let Some(w) = &file.w {
            let w = matrix("w", w)?;
            if w.nrows() != n {
                return Err(schema("w", format!("has {} rows, expected {n}", w.nrows())));
            }
        }
        let opts = &file.options;
        for (field, v) in [("epsilon", opts.epsilon), ("tol", opts.tol), ("time_limit", opts.time_limit)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(schema(format!("options.{field}"), format!("must be positive, got {v}")));
                }
            }
        }
        let plant = Plant::new(a, b.clone()).map_err(|e| schema("<root>", e.to_string()))?;

        let at = |p: &'static str| move |e: structlmi::Error| schema(format!("structure.{p}"), e.to_string());
        let (basis, partition, p_pattern) = match &file.structure {
            StructureSpec::Mask { mask } => {
                if mask.len() != m {
                    return Err(schema("structure.mask", format!("has {} rows, expected {m} (inputs)", mask.len())));
                }
                for (i, r) in mask.iter().enumerate() {
                    if r.len() != n {
                        return Err(schema(
                            format!("structure.mask[{i}]"),
                            format!("row has {} entries, expected {n} (states)", r.len()),
                        ));
                    }
                    if let Some(j) = r.iter().position(|&v| v > 1) {
                        return Err(schema(format!("structure.mask[{i}][{j}]"), "flags must be 0 (free) or 1 (zero)"));
                    }
                }
                let mask = ZeroPatternMask::from_rows(mask).map_err(at("mask"))?;
                let diag = ZeroPatternMask::diagonal(n).map_err(at("mask"))?;
                (basis_from_mask(&mask).map_err(at("mask"))?, None, diag)
            }
            StructureSpec::Decentralized { state_dims, input_dims } => {
                dims("structure.state_dims", state_dims, n, "states")?;
                dims("structure.input_dims", input_dims, m, "inputs")?;
                let part = BlockPartition::new(state_dims.clone(), input_dims.clone()).map_err(at("state_dims"))?;
                let mask = decentralized_mask(&b, &part).map_err(at("state_dims"))?;
                let basis = basis_from_mask(&mask).map_err(at("state_dims"))?;
                let p = ZeroPatternMask::block_diagonal(state_dims).map_err(at("state_dims"))?;
                (basis, Some(part), p)
            }
            StructureSpec::Coordinated { state_dims, input_dims } => {
                dims("structure.state_dims", state_dims, n, "states")?;
                dims("structure.input_dims", input_dims, m, "inputs")?;
                if state_dims.len() != input_dims.len() {
                    return Err(schema(
                        "structure.input_dims",
                        format!("{} input blocks for {} subsystems", input_dims.len(), state_dims.len()),
                    ));
                }
                let part = BlockPartition::new(state_dims.clone(), input_dims.clone()).map_err(at("state_dims"))?;
                let basis = coordinated_basis(&part).map_err(at("input_dims"))?;
                let p = ZeroPatternMask::block_diagonal(state_dims).map_err(at("state_dims"))?;
                (basis, None, p)
            }
            StructureSpec::Basis { matrices } => {
                if matrices.is_empty() {
                    return Err(schema("structure.matrices", "needs at least one matrix"));
                }
                let mut mats = Vec::with_capacity(matrices.len());
                for (i, s) in matrices.iter().enumerate() {
                    let path = format!("structure.matrices[{i}]");
                    let s = matrix(&path, s)?;
                    if s.shape() != (m, n) {
                        return Err(schema(path, format!("is {}x{}, expected {m}x{n}", s.nrows(), s.ncols())));
                    }
                    mats.push(s);
                }
                let basis = StructureBasis::new(m, n, mats).map_err(at("matrices"))?;
                let diag = ZeroPatternMask::diagonal(n).map_err(at("matrices"))?;
                (basis, None, diag)
            }
        };
        Ok(Problem { file, plant, basis, partition, p_pattern })
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> serde_json::Value {
        serde_json::json!({
            "schema_version": 1,
            "name": "t",
            "a": [[0.0, 1.0], [0.0, 0.0]],
            "b": [[0.0], [1.0]],
            "structure": {"type": "mask", "mask": [[0, 0]]}
        })
    }

    fn load(v: serde_json::Value) -> Result<Problem, CliError> {
        Problem::from_file(parse_problem(&v.to_string())?)
    }

    fn path_of(r: Result<Problem, CliError>) -> String {
        match r {
            Err(CliError::Schema { path, .. }) => path,
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn loads_minimal_problem() {
        let p = load(base()).unwrap();
        assert_eq!(p.basis.k(), 2);
        assert_eq!(p.plant.n(), 2);
    }

    #[test]
    fn non_square_a_names_the_field() {
        let mut v = base();
        v["a"] = serde_json::json!([[0.0, 1.0]]);
        assert_eq!(path_of(load(v)), "a");
    }

    #[test]
    fn ragged_row_names_the_row() {
        let mut v = base();
        v["a"] = serde_json::json!([[0.0, 1.0], [0.0]]);
        assert_eq!(path_of(load(v)), "a[1]");
    }

    #[test]
    fn bad_structure_tag_names_the_field() {
        let mut v = base();
        v["structure"] = serde_json::json!({"type": "banded"});
        assert_eq!(path_of(load(v)), "structure.type");
    }

    #[test]
    fn wrong_type_deep_in_structure() {
        let mut v = base();
        v["structure"] = serde_json::json!({"type": "decentralized", "state_dims": [1, "x"], "input_dims": [1]});
        assert_eq!(path_of(load(v)), "structure.state_dims[1]");
    }

    #[test]
    fn mask_shape_is_checked() {
        let mut v = base();
        v["structure"]["mask"] = serde_json::json!([[0, 0, 0]]);
        assert_eq!(path_of(load(v)), "structure.mask[0]");
    }

    #[test]
    fn partition_sums_are_checked() {
        let mut v = base();
        v["structure"] = serde_json::json!({"type": "decentralized", "state_dims": [1], "input_dims": [1]});
        assert_eq!(path_of(load(v)), "structure.state_dims");
    }

    #[test]
    fn unknown_method_is_rejected() {
        let mut v = base();
        v["options"] = serde_json::json!({"method": "fastest"});
        assert_eq!(path_of(load(v)), "options.method");
    }

    #[test]
    fn version_is_checked() {
        let mut v = base();
        v["schema_version"] = serde_json::json!(2);
        assert_eq!(path_of(load(v)), "schema_version");
    }
}
