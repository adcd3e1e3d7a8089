//! Command-line front end: argument definitions, spec files and command dispatch.
//!
//! [`run`] turns parsed arguments into a [`CommandResult`], which renders both as
//! plain text and as a JSON tree.

pub mod error;
pub mod spec;

use std::collections::BTreeMap;

use clap::{ArgGroup, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use wuclass::blowup::{BlowUpElement, BlowUpModel};
use wuclass::obstruction::{
    blowup_obstruction_witness, hypersurface_ctx, obstruction_witness, BlowUpEmbeddingContext,
    EmbeddingContext,
};
use wuclass::{Coeff, Element};

pub use error::CliError;

/// Wu classes, blow-ups and embedding obstructions from the command line.
#[derive(Debug, Parser)]
#[command(name = "wuclass", version, about)]
pub struct Cli {
    /// Print the result as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wu class of a manifold (built-in name such as `cp3`, or a spec file).
    Wu {
        spec: String,
        /// Solve the defining pairing equations instead of using Wu's formula.
        #[arg(long)]
        oracle: bool,
    },
    /// Computations on the blow-up of an ambient manifold along a center.
    Blowup {
        /// Ambient manifold: built-in name or spec file.
        #[arg(long)]
        ambient: String,
        /// Center: `point`, `linear-cp K N`, or a center spec file.
        #[arg(long)]
        center: String,
        #[command(subcommand)]
        query: BlowupQuery,
    },
    /// The codimension-two embedding obstruction.
    #[command(group(ArgGroup::new("target").required(true).args(["hypersurface", "ambient"])))]
    Obstruction {
        /// A degree-D hypersurface in CP^(N+1).
        #[arg(long, num_args = 2, value_names = ["N", "D"])]
        hypersurface: Option<Vec<u32>>,
        /// Ambient manifold of dimension 2n+2: built-in name or spec file.
        #[arg(long, requires = "u")]
        ambient: Option<String>,
        /// Mod-2 dual class of the submanifold, in degree 2.
        #[arg(long, requires = "ambient")]
        u: Option<String>,
        /// Blow up a point of the submanifold first.
        #[arg(long)]
        blowup_point: bool,
        /// Report a class detecting a nonvanishing obstruction.
        #[arg(long)]
        witness: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum BlowupQuery {
    /// Total Wu class of the blow-up.
    Wu,
    /// Whether the degree-K Wu class vanishes.
    Vanish { k: u32 },
    /// Mod-2 Betti number in degree K.
    Betti { k: u32 },
    /// Sq^I of a class, written with `pi*` and `E(...)` terms.
    Sq { expr: String, i: u32 },
    /// Degree-4I L-class (needs rational data for ambient and center).
    Lclass { i: u32 },
}

/// The outcome of one command, with a text and a JSON rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandResult {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub text: String,
    /// Result class as `(monomial, coefficient)` pairs in monomial order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishes: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl CommandResult {
    fn new(command: &str, inputs: &[(&str, String)], text: String) -> Self {
        CommandResult {
            command: command.to_string(),
            inputs: inputs
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            text,
            class: None,
            vanishes: None,
            count: None,
            witness: None,
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("command results serialize")
    }
}

fn element_terms<F: Coeff>(
    x: &Element<F>,
    wrap: impl Fn(String) -> String,
) -> Vec<(String, String)> {
    x.terms()
        .map(|(m, c)| {
            (
                wrap(Element::<F>::monomial_string(x.presentation(), m)),
                c.to_string(),
            )
        })
        .collect()
}

fn class_terms<F: Coeff>(x: &Element<F>) -> Vec<(String, String)> {
    element_terms(x, |m| m)
}

fn blowup_terms<F: Coeff>(x: &BlowUpElement<F>) -> Vec<(String, String)> {
    let mut terms = element_terms(x.base(), |m| format!("pi*{m}"));
    terms.extend(element_terms(x.exc(), |m| format!("E({m})")));
    terms
}

fn vanishing(v: bool) -> &'static str {
    if v {
        "vanishing"
    } else {
        "nonvanishing"
    }
}

/// Execute one parsed command line.
pub fn run(cli: &Cli) -> Result<CommandResult, CliError> {
    match &cli.command {
        Command::Wu { spec, oracle } => {
            let m = spec::load_manifold(spec)?;
            let v = if *oracle {
                m.wu_class_oracle()?
            } else {
                m.wu_class()?
            };
            let mut r = CommandResult::new(
                "wu",
                &[("spec", spec.clone()), ("oracle", oracle.to_string())],
                v.to_string(),
            );
            r.class = Some(class_terms(&v));
            Ok(r)
        }
        Command::Blowup {
            ambient,
            center,
            query,
        } => {
            let m = spec::load_manifold(ambient)?;
            let model = BlowUpModel::new(spec::load_center(center, &m)?)?;
            let mut inputs = vec![("ambient", ambient.clone()), ("center", center.clone())];
            match query {
                BlowupQuery::Wu => {
                    let v = model.wu_blowup()?;
                    let mut r = CommandResult::new("blowup wu", &inputs, v.to_string());
                    r.class = Some(blowup_terms(&v));
                    Ok(r)
                }
                BlowupQuery::Vanish { k } => {
                    inputs.push(("k", k.to_string()));
                    let v = model.wu_vanishes(*k)?;
                    let mut r = CommandResult::new("blowup vanish", &inputs, vanishing(v).into());
                    r.vanishes = Some(v);
                    Ok(r)
                }
                BlowupQuery::Betti { k } => {
                    inputs.push(("k", k.to_string()));
                    let b = model.betti().get(*k as usize).copied().unwrap_or(0);
                    let mut r = CommandResult::new("blowup betti", &inputs, b.to_string());
                    r.count = Some(b);
                    Ok(r)
                }
                BlowupQuery::Sq { expr, i } => {
                    inputs.push(("expr", expr.clone()));
                    inputs.push(("i", i.to_string()));
                    let x = model.parse(expr)?;
                    let s = model.sq_i_blowup(&x, *i)?;
                    let mut r = CommandResult::new("blowup sq", &inputs, s.to_string());
                    r.class = Some(blowup_terms(&s));
                    Ok(r)
                }
                BlowupQuery::Lclass { i } => {
                    inputs.push(("i", i.to_string()));
                    let l = model.l_class_blowup(*i)?;
                    let mut r = CommandResult::new("blowup lclass", &inputs, l.to_string());
                    r.class = Some(blowup_terms(&l));
                    Ok(r)
                }
            }
        }
        Command::Obstruction {
            hypersurface,
            ambient,
            u,
            blowup_point,
            witness,
        } => {
            let mut inputs = Vec::new();
            let ctx = match (hypersurface.as_deref(), ambient, u) {
                (Some(&[n, d]), _, _) => {
                    inputs.push(("hypersurface", format!("{n} {d}")));
                    hypersurface_ctx(n, d)?
                }
                (None, Some(ambient), Some(u)) => {
                    inputs.push(("ambient", ambient.clone()));
                    inputs.push(("u", u.clone()));
                    let m = spec::load_manifold(ambient)?;
                    let u = m.parse(u)?;
                    EmbeddingContext::new(m, u, None)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "give either --hypersurface N D or --ambient SPEC --u EXPR".into(),
                    ))
                }
            };
            inputs.push(("blowup_point", blowup_point.to_string()));
            let warnings = ctx.warnings();
            let found = if *blowup_point {
                let blown = BlowUpEmbeddingContext::at_point(ctx)?;
                blowup_obstruction_witness(&blown)?.map(|x| x.to_string())
            } else {
                obstruction_witness(&ctx)?.map(|x| x.to_string())
            };
            let vanishes = found.is_none();
            let text = match (&found, witness) {
                (Some(x), true) => format!("nonvanishing; witness {x}"),
                _ => vanishing(vanishes).to_string(),
            };
            let mut r = CommandResult::new("obstruction", &inputs, text);
            r.vanishes = Some(vanishes);
            if *witness {
                r.witness = found;
            }
            r.warnings = warnings;
            Ok(r)
        }
    }
}
