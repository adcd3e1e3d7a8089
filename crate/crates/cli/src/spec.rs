//! Manifold and center spec files, and built-in models.
//!
//! Both formats are TOML. Expression-valued fields use the ring expression
//! grammar (`+`, `-`, `*`, `^`, parentheses, coefficients like `3` or `1/2`).
//!
//! A manifold spec:
//!
//! ```toml
//! name = "CP3"
//! dim = 6
//! coefficients = "integral"   # "gf2", "rational" or "integral"
//! top = "x^3"
//! sw = "(1+x)^4"
//! pontryagin = "(1+x^2)^4"    # needs rational or integral coefficients
//!
//! [[generator]]
//! name = "x"
//! degree = 2
//! sq = "x + x^2"              # optional; defaults to g + g^2
//!
//! [[relation]]
//! lhs = "x^4"
//! rhs = "0"
//! ```
//!
//! A center spec describes `N ⊂ M`; the ambient comes from the command line:
//!
//! ```toml
//! center = "cp1.toml"         # built-in name or path relative to this file
//! codim = 6
//! normal_chern = "(1+a)^3"
//!
//! [pullback]                  # image of every ambient generator
//! x = "a"
//!
//! [gysin]                     # optional: image of every center basis monomial
//! "1" = "x^3"
//! "a" = "x^4"
//! ```

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use toml::Spanned;

use wuclass::blowup::{RationalSubmanifoldData, SubmanifoldData};
use wuclass::charclass::chern_mod2_to_sw;
use wuclass::manifold::{cp, point, ManifoldModel, RationalCompanion};
use wuclass::steenrod::SqAction;
use wuclass::{
    Coeff, Element, Gf2, LinearMap, Presentation, PresentationBuilder, Rational, RingHom,
};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifoldFile {
    name: Option<String>,
    dim: u32,
    coefficients: Option<Spanned<String>>,
    #[serde(default)]
    generator: Vec<GeneratorEntry>,
    #[serde(default)]
    relation: Vec<RelationEntry>,
    top: Spanned<String>,
    sw: Spanned<String>,
    pontryagin: Option<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorEntry {
    name: Spanned<String>,
    degree: u32,
    sq: Option<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationEntry {
    lhs: Spanned<String>,
    rhs: Spanned<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CenterFile {
    center: Spanned<String>,
    codim: Spanned<u32>,
    normal_chern: Spanned<String>,
    pullback: BTreeMap<String, Spanned<String>>,
    gysin: Option<BTreeMap<String, Spanned<String>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Coefficients {
    Gf2,
    Rational,
    Integral,
}

/// Source text with a name, for line/column diagnostics.
struct Source<'a> {
    name: &'a str,
    text: &'a str,
}

impl Source<'_> {
    fn error_at(&self, offset: usize, message: impl Into<String>) -> CliError {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        CliError::Spec {
            source_name: self.name.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    /// Locate an error raised while evaluating the string value at `span`.
    fn field_error(&self, span: Range<usize>, e: wuclass::Error) -> CliError {
        match e {
            // the value starts one byte after its opening quote
            wuclass::Error::Parse {
                message, column, ..
            } => self.error_at(span.start + column, message),
            other if other.is_input_error() => self.error_at(span.start, other.to_string()),
            other => CliError::Core(other),
        }
    }

    fn toml<T: for<'de> Deserialize<'de>>(&self) -> Result<T, CliError> {
        toml::from_str(self.text).map_err(|e| {
            let offset = e.span().map_or(0, |s| s.start);
            self.error_at(offset, e.message().trim().to_string())
        })
    }

    fn parse<F: Coeff>(
        &self,
        pres: &Arc<Presentation<F>>,
        field: &Spanned<String>,
    ) -> Result<Element<F>, CliError> {
        pres.parse(field.get_ref())
            .map_err(|e| self.field_error(field.span(), e))
    }
}

fn parse_power(src: &Source, lhs: &Spanned<String>) -> Result<(String, u32), CliError> {
    let text = lhs.get_ref().trim();
    let (name, exp) = match text.split_once('^') {
        Some((n, e)) => (n.trim(), e.trim().parse::<u32>().ok()),
        None => (text, Some(1)),
    };
    match exp {
        Some(e)
            if e > 0
                && !name.is_empty()
                && name.chars().all(|c| c.is_alphanumeric() || c == '_') =>
        {
            Ok((name.to_string(), e))
        }
        _ => Err(src.error_at(
            lhs.span().start,
            format!("relation left side `{text}` must be a generator power such as `x^3`"),
        )),
    }
}

fn build_presentation<F: Coeff>(
    src: &Source,
    file: &ManifoldFile,
    powers: &[(String, u32)],
) -> Result<Arc<Presentation<F>>, CliError> {
    let mut builder = PresentationBuilder::<F>::new(file.dim);
    for g in &file.generator {
        builder = builder.generator(g.name.get_ref().clone(), g.degree);
    }
    for ((name, e), rel) in powers.iter().zip(&file.relation) {
        builder = builder.rule(name.clone(), *e, rel.rhs.get_ref().clone());
    }
    builder.build().map_err(|e| match e {
        wuclass::Error::Parse { .. } | wuclass::Error::UnknownGenerator(_) => {
            // locate the offending relation by re-parsing each right side on its own
            let free = file
                .generator
                .iter()
                .fold(PresentationBuilder::<F>::new(u32::MAX), |b, g| {
                    b.generator(g.name.get_ref().clone(), g.degree)
                })
                .build();
            match free {
                Ok(free) => file
                    .relation
                    .iter()
                    .find_map(|r| {
                        free.parse(r.rhs.get_ref())
                            .err()
                            .map(|e| src.field_error(r.rhs.span(), e))
                    })
                    .unwrap_or(CliError::Core(e)),
                Err(_) => CliError::Core(e),
            }
        }
        other => CliError::Core(other),
    })
}

/// Parse and validate a manifold spec.
pub fn parse_manifold(text: &str, source_name: &str) -> Result<ManifoldModel, CliError> {
    let src = Source {
        name: source_name,
        text,
    };
    let file: ManifoldFile = src.toml()?;
    let coefficients = match &file.coefficients {
        None => Coefficients::Gf2,
        Some(c) => match c.get_ref().as_str() {
            "gf2" => Coefficients::Gf2,
            "rational" => Coefficients::Rational,
            "integral" => Coefficients::Integral,
            other => {
                return Err(src.error_at(
                    c.span().start,
                    format!(
                    "coefficients must be \"gf2\", \"rational\" or \"integral\", not \"{other}\""
                ),
                ))
            }
        },
    };
    let powers = file
        .relation
        .iter()
        .map(|r| parse_power(&src, &r.lhs))
        .collect::<Result<Vec<_>, _>>()?;
    let pres = build_presentation::<Gf2>(&src, &file, &powers)?;
    let declared = file
        .generator
        .iter()
        .map(|g| g.sq.as_ref().map(|s| src.parse(&pres, s)).transpose())
        .collect::<Result<Vec<_>, _>>()?;
    let sq = SqAction::new(&pres, declared)?;
    let top = src.parse(&pres, &file.top)?;
    let top_monomial = match top.terms().collect::<Vec<_>>().as_slice() {
        [(m, _)] => (*m).clone(),
        _ => {
            return Err(src.error_at(
                file.top.span().start,
                format!("top class `{top}` must be a single monomial"),
            ))
        }
    };
    let sw = src.parse(&pres, &file.sw)?;
    let qpres = match coefficients {
        Coefficients::Gf2 => None,
        _ => Some(build_presentation::<Rational>(&src, &file, &powers)?),
    };
    if let (Some(qpres), Coefficients::Integral) = (&qpres, coefficients) {
        for ((name, e), rel) in powers.iter().zip(&file.relation) {
            let rhs = src.parse(qpres, &rel.rhs)?;
            if rhs.terms().any(|(_, c)| !c.is_integer()) {
                return Err(src.error_at(
                    rel.rhs.span().start,
                    format!("relation for {name}^{e} has non-integral coefficients"),
                ));
            }
        }
    }
    let rational = match (&file.pontryagin, &qpres) {
        (None, _) => None,
        (Some(p), None) => {
            return Err(src.error_at(
                p.span().start,
                "a Pontryagin class needs rational or integral coefficients",
            ))
        }
        (Some(p), Some(qpres)) => Some(RationalCompanion::new(qpres, src.parse(qpres, p)?)),
    };
    let name = file.name.clone().unwrap_or_else(|| source_name.to_string());
    Ok(ManifoldModel::new(
        name,
        sq,
        file.dim,
        top_monomial,
        sw,
        rational,
    )?)
}

fn quote(s: &str) -> String {
    format!("\"{s}\"")
}

/// Render a model as a manifold spec; parsing the result reproduces the model.
pub fn print_manifold(m: &ManifoldModel) -> String {
    let pres = m.presentation();
    let mut out = String::new();
    out.push_str(&format!("name = {}\n", quote(m.name())));
    out.push_str(&format!("dim = {}\n", m.dim()));
    let coefficients = if m.rational().is_some() {
        "rational"
    } else {
        "gf2"
    };
    out.push_str(&format!("coefficients = {}\n", quote(coefficients)));
    out.push_str(&format!(
        "top = {}\n",
        quote(&Element::<Gf2>::monomial_string(pres, m.top()))
    ));
    out.push_str(&format!("sw = {}\n", quote(&m.sw().to_string())));
    if let Some(rc) = m.rational() {
        out.push_str(&format!(
            "pontryagin = {}\n",
            quote(&rc.pontryagin().to_string())
        ));
    }
    for (i, g) in pres.generators().iter().enumerate() {
        out.push_str(&format!(
            "\n[[generator]]\nname = {}\ndegree = {}\n",
            quote(&g.name),
            g.degree
        ));
        if let Some(img) = m.sq().image(i) {
            out.push_str(&format!("sq = {}\n", quote(&img.to_string())));
        }
    }
    fn relations<F: Coeff>(pres: &Arc<Presentation<F>>, out: &mut String) {
        for rule in pres.rules() {
            let g = &pres.generators()[rule.generator];
            let mut exps = vec![0; pres.ngens()];
            exps[rule.generator] = rule.exponent;
            let rhs = if g.degree * rule.exponent > pres.truncation_degree() {
                let raw: Vec<_> = rule
                    .replacement
                    .iter()
                    .map(|(e, c)| (c.clone(), e.clone()))
                    .collect();
                render_raw(pres, &raw)
            } else {
                Element::from_exponents(pres, exps).to_string()
            };
            out.push_str(&format!(
                "\n[[relation]]\nlhs = {}\nrhs = {}\n",
                quote(&format!("{}^{}", g.name, rule.exponent)),
                quote(&rhs)
            ));
        }
    }
    match m.rational() {
        Some(rc) => relations(rc.presentation(), &mut out),
        None => relations(pres, &mut out),
    }
    out
}

/// Render raw rule terms (possibly above the truncation degree) as an expression.
fn render_raw<F: Coeff>(pres: &Presentation<F>, raw: &[(F, Vec<u32>)]) -> String {
    if raw.is_empty() {
        return "0".into();
    }
    raw.iter()
        .map(|(c, e)| {
            let m = pres.monomial(e.clone());
            format!("({c})*{}", Element::<F>::monomial_string(pres, &m))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// A built-in manifold name (`cpN`, `cp N`, `point`), if `arg` is one.
pub fn builtin_manifold(arg: &str) -> Option<ManifoldModel> {
    let words: Vec<&str> = arg.split_whitespace().collect();
    match words.as_slice() {
        ["point"] => Some(point()),
        ["cp", n] => n.parse().ok().map(cp),
        [w] => w.strip_prefix("cp").and_then(|n| n.parse().ok()).map(cp),
        _ => None,
    }
}

/// A built-in name or the path of a manifold spec.
pub fn load_manifold(arg: &str) -> Result<ManifoldModel, CliError> {
    if let Some(m) = builtin_manifold(arg) {
        return Ok(m);
    }
    let path = PathBuf::from(arg);
    if !path.exists() && !arg.contains(['/', '.']) {
        return Err(CliError::Usage(format!(
            "`{arg}` is neither a built-in (cpN, point) nor an existing spec file"
        )));
    }
    parse_manifold(&read(&path)?, arg)
}

/// A built-in center (`point`, `linear-cp K N`) or the path of a center spec.
pub fn load_center(arg: &str, ambient: &ManifoldModel) -> Result<SubmanifoldData, CliError> {
    let words: Vec<&str> = arg
        .split(|c: char| c.is_whitespace() || c == ':')
        .filter(|w| !w.is_empty())
        .collect();
    match words.as_slice() {
        ["point"] => return Ok(SubmanifoldData::point(ambient)?),
        ["linear-cp", k, n] => {
            let (k, n): (u32, u32) = match (k.parse(), n.parse()) {
                (Ok(k), Ok(n)) => (k, n),
                _ => {
                    return Err(CliError::Usage(format!(
                        "bad center `{arg}`; expected linear-cp K N"
                    )))
                }
            };
            let s = SubmanifoldData::linear_cp(k, n)?;
            if s.ambient().presentation() != ambient.presentation() {
                return Err(CliError::Usage(format!(
                    "linear-cp {k} {n} needs ambient cp{n}"
                )));
            }
            return Ok(s);
        }
        _ => {}
    }
    let path = PathBuf::from(arg);
    let text = read(&path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_center(&text, arg, &dir, ambient)
}

/// Parse a center spec against the given ambient model.
pub fn parse_center(
    text: &str,
    source_name: &str,
    base_dir: &Path,
    ambient: &ManifoldModel,
) -> Result<SubmanifoldData, CliError> {
    let src = Source {
        name: source_name,
        text,
    };
    let file: CenterFile = src.toml()?;
    let center_ref = file.center.get_ref();
    let center = match builtin_manifold(center_ref) {
        Some(m) => m,
        None => {
            let path = base_dir.join(center_ref);
            let text = read(&path)?;
            parse_manifold(&text, &path.display().to_string())?
        }
    };
    let codim = *file.codim.get_ref();
    if codim % 2 == 1 {
        return Err(src.error_at(
            file.codim.span().start,
            format!("codim {codim} must be even"),
        ));
    }
    let r = codim / 2;

    fn pullback_images<F: Coeff>(
        src: &Source,
        file: &CenterFile,
        ambient: &Arc<Presentation<F>>,
        center: &Arc<Presentation<F>>,
    ) -> Result<RingHom<F>, CliError> {
        for key in file.pullback.keys() {
            if ambient.generator_index(key).is_err() {
                let span = file.pullback[key].span();
                return Err(
                    src.error_at(span.start, format!("`{key}` is not an ambient generator"))
                );
            }
        }
        let images = ambient
            .generators()
            .iter()
            .map(|g| match file.pullback.get(&g.name) {
                Some(expr) => src.parse(center, expr),
                None => Err(CliError::Usage(format!(
                    "pullback of ambient generator `{}` is missing",
                    g.name
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RingHom::new(ambient, center, images)?)
    }

    fn gysin_map<F: Coeff>(
        src: &Source,
        table: &BTreeMap<String, Spanned<String>>,
        ambient: &Arc<Presentation<F>>,
        center: &Arc<Presentation<F>>,
        shift: u32,
    ) -> Result<LinearMap<F>, CliError> {
        let mut images = BTreeMap::new();
        for (key, value) in table {
            let m = center
                .parse(key)
                .map_err(|e| src.field_error(value.span(), e))?;
            let mono = match m.terms().collect::<Vec<_>>().as_slice() {
                [(mono, c)] if c.is_one() => (*mono).clone(),
                _ => {
                    return Err(src.error_at(
                        value.span().start,
                        format!("gysin key `{key}` is not a basis monomial of the center"),
                    ))
                }
            };
            images.insert(mono, src.parse(ambient, value)?);
        }
        Ok(LinearMap::new(center, ambient, shift, images)?)
    }

    let pullback = pullback_images(&src, &file, ambient.presentation(), center.presentation())?;
    let gysin = file
        .gysin
        .as_ref()
        .map(|t| {
            gysin_map(
                &src,
                t,
                ambient.presentation(),
                center.presentation(),
                codim,
            )
        })
        .transpose()?;
    let rational_rings = match (ambient.rational(), center.rational()) {
        (Some(mq), Some(nq)) => Some((mq.presentation().clone(), nq.presentation().clone())),
        _ => None,
    };
    let chern = match &rational_rings {
        Some((_, nq)) => {
            let q = src.parse(nq, &file.normal_chern)?;
            let reduced = chern_mod2_to_sw(&q, center.presentation())
                .map_err(|e| src.field_error(file.normal_chern.span(), e))?;
            (reduced, Some(q))
        }
        None => (src.parse(center.presentation(), &file.normal_chern)?, None),
    };
    let data = SubmanifoldData::new(ambient.clone(), center, r, pullback, chern.0, gysin)?;
    match (rational_rings, chern.1) {
        (Some((mq, nq)), Some(qchern)) => {
            let qpullback = pullback_images(&src, &file, &mq, &nq)?;
            let qgysin = file
                .gysin
                .as_ref()
                .map(|t| gysin_map(&src, t, &mq, &nq, codim))
                .transpose()?;
            Ok(data.with_rational(RationalSubmanifoldData::new(qpullback, qchern, qgysin))?)
        }
        _ => Ok(data),
    }
}
