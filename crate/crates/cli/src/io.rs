use std::fs;
use std::path::{Path, PathBuf};

use lpp_forge::gf::{Field, FieldDescriptor, FieldSpec};
use lpp_forge::mpoly::{MPoly, PolyJson};
use lpp_forge::LatinSquare;
use serde::Serialize;

use crate::{Failure, EXIT_INVALID_FIELD};

pub fn parse_modulus(input: &str) -> Result<Vec<u32>, Failure> {
    input
        .split(',')
        .map(|c| c.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            Failure::new(
                EXIT_INVALID_FIELD,
                format!("cannot parse modulus {input:?}"),
            )
        })
}

pub fn build_field(
    p: u32,
    r: u32,
    modulus: Option<&str>,
    order: Option<&str>,
) -> Result<Field, Failure> {
    let invalid = |e: lpp_forge::Error| Failure::new(EXIT_INVALID_FIELD, e);
    let modulus = modulus.map(parse_modulus).transpose()?;
    let base = FieldSpec::new(p, r, modulus, None).map_err(invalid)?;
    match order {
        Some(o) => {
            let labels: Vec<&str> = o
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            base.with_order_labels(&labels).map_err(invalid)
        }
        None => Ok(base),
    }
}

pub fn read_field(path: &Path) -> Result<Field, Failure> {
    let invalid = |e: String| Failure::new(EXIT_INVALID_FIELD, format!("{}: {e}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| invalid(e.to_string()))?;
    let d: FieldDescriptor = serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
    FieldSpec::from_descriptor(&d).map_err(|e| invalid(e.to_string()))
}

/// Descriptor plus the human-readable modulus and element labels.
#[derive(Serialize)]
pub struct FieldOut {
    #[serde(flatten)]
    pub descriptor: FieldDescriptor,
    pub q: usize,
    pub modulus_poly: String,
    pub labels: Vec<String>,
}

impl FieldOut {
    pub fn new(field: &Field) -> Self {
        FieldOut {
            descriptor: field.descriptor(),
            q: field.q(),
            modulus_poly: field.modulus_string(),
            labels: (0..field.q()).map(|i| field.label(i)).collect(),
        }
    }
}

/// A polynomial as emitted by every command; `poly` is what `load_poly` reads back.
#[derive(Serialize)]
pub struct PolyOut {
    pub text: String,
    pub monomials: usize,
    pub degree: Option<u32>,
    pub poly: PolyJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<Vec<String>>>,
}

impl PolyOut {
    pub fn new(f: &MPoly) -> Self {
        let grid = lpp_forge::lpp::lpp_to_latin(f)
            .ok()
            .map(|sq| label_grid(f.field(), &sq));
        PolyOut {
            text: f.to_string(),
            monomials: f.monomial_count(),
            degree: f.total_degree().finite(),
            poly: f.to_json(),
            grid,
        }
    }
}

pub fn label_grid(field: &Field, sq: &LatinSquare) -> Vec<Vec<String>> {
    sq.grid()
        .iter()
        .map(|r| r.iter().map(|&v| field.label(v)).collect())
        .collect()
}

pub fn grid_csv(field: &Field, sq: &LatinSquare) -> String {
    label_grid(field, sq)
        .iter()
        .map(|r| r.join(",") + "\n")
        .collect()
}

fn parse_grid(field: &Field, text: &str) -> lpp_forge::Result<Vec<Vec<usize>>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| field.parse_element_list(l))
        .collect()
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn json_poly(field: &Field, text: &str) -> Result<MPoly, Failure> {
    let mut value: serde_json::Value = serde_json::from_str(text)?;
    if let Some(inner) = value.get_mut("poly") {
        value = inner.take();
    }
    let json: PolyJson = serde_json::from_value(value)?;
    Ok(MPoly::from_json(field, &json)?)
}

/// A polynomial from a JSON file, a CSV grid of labels, or an inline expression.
pub fn load_poly(field: &Field, nvars: usize, input: &str) -> Result<MPoly, Failure> {
    let path = Path::new(input);
    if !path.is_file() {
        return Ok(MPoly::parse(field, nvars, input)?);
    }
    let text = fs::read_to_string(path)?;
    if is_json(&text) {
        return json_poly(field, &text);
    }
    let table: Vec<usize> = parse_grid(field, &text)?.into_iter().flatten().collect();
    Ok(MPoly::interpolate(field, 2, &table)?)
}

/// A square from a CSV grid, or the level grid of a polynomial input. `Ok(None)` if it is not Latin.
pub fn load_square(field: &Field, input: &str) -> Result<Option<LatinSquare>, Failure> {
    let path = Path::new(input);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        if !is_json(&text) {
            return Ok(LatinSquare::new(parse_grid(field, &text)?).ok());
        }
    }
    Ok(lpp_forge::lpp::lpp_to_latin(&load_poly(field, 2, input)?).ok())
}

/// Inputs with every directory replaced by the `.csv` files it contains, in name order.
pub fn expand_inputs(inputs: &[String]) -> Result<Vec<String>, Failure> {
    let mut out = Vec::new();
    for input in inputs {
        let path = Path::new(input);
        if path.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(path)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "csv"))
                .collect();
            files.sort();
            out.extend(files.into_iter().map(|p| p.display().to_string()));
        } else {
            out.push(input.clone());
        }
    }
    Ok(out)
}

pub fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    outln!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}
