//! Named pictures for the fixture groups.

use std::collections::BTreeMap;

use super::{Picture, Prefactor, RepError};
use crate::extension::Extension;
use crate::specfile::parse_combination;
use crate::symbolic::{parse_expr, Expr, SymbolTable};

/// Declarative picture data; every string is parsed against the group's symbols plus the
/// reduced variables.
pub(crate) struct PictureSpec<'a> {
    pub name: &'a str,
    pub polarization: Vec<Vec<Expr>>,
    pub exponent: &'a str,
    pub powers: &'a [(&'a str, &'a str)],
    pub reduced: &'a [(&'a str, &'a str)],
    pub section: &'a [(&'a str, &'a str)],
}

pub(crate) fn picture_table(ext: &Extension, reduced: &[(&str, &str)]) -> Result<SymbolTable, RepError> {
    let mut table = ext.law.table.clone();
    for (r, _) in reduced {
        table.free(r).map_err(|e| RepError::Input(e.to_string()))?;
    }
    Ok(table)
}

pub(crate) fn parse_vectors(ext: &Extension, texts: &[&str]) -> Result<Vec<Vec<Expr>>, RepError> {
    texts
        .iter()
        .map(|t| parse_combination(t, ext.algebra.names(), &ext.law.table).map_err(RepError::Input))
        .collect()
}

pub(crate) fn build_picture(ext: &Extension, spec: PictureSpec<'_>) -> Result<Picture, RepError> {
    let table = picture_table(ext, spec.reduced)?;
    let parse = |s: &str| parse_expr(s, &table).map_err(|e| RepError::Input(format!("`{s}`: {e}")));
    let exponent = parse(spec.exponent)?;
    let powers = spec.powers.iter().map(|(b, p)| Ok((parse(b)?, parse(p)?))).collect::<Result<_, RepError>>()?;
    let mut reduced = Vec::new();
    let mut reduced_exprs = Vec::new();
    for (name, e) in spec.reduced {
        reduced.push(table.get(name).expect("declared").clone());
        reduced_exprs.push(parse(e)?);
    }
    let mut section = BTreeMap::new();
    for (name, e) in spec.section {
        let sym = table.get(name).ok_or_else(|| RepError::Input(format!("unknown coordinate `{name}`")))?;
        section.insert(sym.clone(), parse(e)?);
    }
    Ok(Picture {
        name: spec.name.into(),
        polarization: spec.polarization,
        prefactor: Prefactor { exponent, powers },
        reduced,
        reduced_exprs,
        section,
    })
}

/// The first-order pictures of the one-dimensional Heisenberg–Weyl group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwPicture {
    /// Polarization `<X_v>`, functions of `q`.
    Configuration,
    /// Polarization `<X_q>`, functions of `v`.
    Momentum,
    /// Polarization `<X_q + i omega X_v>`, holomorphic functions of `q + i v/omega`.
    Complex,
}

impl HwPicture {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "q" | "configuration" => Some(HwPicture::Configuration),
            "p" | "v" | "momentum" => Some(HwPicture::Momentum),
            "c" | "complex" | "bargmann" => Some(HwPicture::Complex),
            _ => None,
        }
    }
}

pub fn hw_picture(ext: &Extension, which: HwPicture) -> Result<Picture, RepError> {
    let (name, pol, exponent, reduced, section): (_, _, _, &[(&str, &str)], &[(&str, &str)]) = match which {
        HwPicture::Configuration => (
            "configuration",
            "v",
            "-i*m*q*v/(2*hbar)",
            &[("u", "q")],
            &[("q", "u"), ("v", "0"), ("phi", "0")],
        ),
        HwPicture::Momentum => (
            "momentum",
            "q",
            "i*m*q*v/(2*hbar)",
            &[("u", "v")],
            &[("q", "0"), ("v", "u"), ("phi", "0")],
        ),
        HwPicture::Complex => (
            "complex",
            "q + i*omega*v",
            "m*(omega*q^2 + v^2/omega)/(4*hbar)",
            &[("u", "q + i*v/omega")],
            &[("q", "u"), ("v", "0"), ("phi", "0")],
        ),
    };
    build_picture(
        ext,
        PictureSpec {
            name,
            polarization: parse_vectors(ext, &[pol])?,
            exponent,
            powers: &[],
            reduced,
            section,
        },
    )
}

/// `Psi = w1^lambda Phi(tau)`, `w1 = z1/sqrt(z1 z1c + z2 z2c)`, `tau = z2c/z1`, for the chart
/// `z1 != 0`.
pub fn su2_picture(ext: &Extension, polarization: Vec<Vec<Expr>>) -> Result<Picture, RepError> {
    build_picture(
        ext,
        PictureSpec {
            name: "su2-nonhorizontal",
            polarization,
            exponent: "0",
            powers: &[("z1", "lambda"), ("z1*z1c + z2*z2c", "-lambda/2")],
            reduced: &[("tau", "z2c/z1")],
            section: &[("z1", "1"), ("z2", "0"), ("z1c", "1"), ("z2c", "tau"), ("phi", "0")],
        },
    )
}
