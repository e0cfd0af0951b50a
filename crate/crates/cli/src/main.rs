//! `fibcert`: fibering certificates and the genus/Betti bookkeeping behind them.
//!
//! Exit codes: 0 certified (or report produced), 1 a check failed or a
//! counterexample was found, 2 usage or input error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use fibering::akcert::{ak_certificate, lift_variant_survey, GeneratorSelection};
use fibering::branchedcover::DoubleCoverModel;
use fibering::coverbundle::{cover_certificate, cover_h1_data, ProductCoverSpec};
use fibering::salter::no_fifth_fibering_check;
use fibering::surfgroup::{
    abelianized_rank, mod2_homology_cover, reidemeister_schreier, riemann_hurwitz_genus,
    FiniteQuotient, SurfacePresentation,
};
use fibering::FiberingCertificate;

#[derive(Parser, Debug)]
#[command(name = "fibcert", version, about = "Fibering certificates for surface bundles over surfaces")]
struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock timing in the report (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Selection {
    Default,
    Minimal,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Atiyah–Kodaira manifold: invariant subspace, b1 and the two-fibering certificate.
    Ak {
        #[arg(long, value_enum, default_value = "default")]
        selection: Selection,
        /// Tabulate invariant dimensions over sign and deck-twist choices instead.
        #[arg(long)]
        variant_survey: bool,
    },
    /// Salter's doubled punctured product: the four-fibering certificate.
    Salter {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        genus: u32,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Finite regular cover of a product of surfaces, read from a JSON spec.
    Cover {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Riemann–Hurwitz genus of a branched cover.
    Rh {
        #[arg(short = 'g', long = "base-genus")]
        base_genus: usize,
        #[arg(short = 'd', long)]
        degree: usize,
        /// Branch multiplicities, e.g. `2,2` or `2x128`.
        #[arg(short = 'b', long, default_value = "")]
        branch: String,
    },
    /// Reidemeister–Schreier on a closed surface group.
    Rs {
        #[arg(long)]
        genus: usize,
        /// Use the mod-2 homology cover (otherwise the trivial cover).
        #[arg(long)]
        mod2: bool,
    },
}

#[derive(Serialize)]
struct ReportEnvelope {
    tool_version: &'static str,
    command: &'static str,
    parameters: Value,
    seed: Option<u64>,
    payload: Value,
    timing: Option<Value>,
}

fn parse_branch(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (m, count) = match item.split_once(['x', 'X', '×', '*']) {
            Some((m, k)) => (m.trim(), k.trim()),
            None => (item, "1"),
        };
        let m: usize = m.parse().map_err(|_| format!("bad multiplicity `{item}`"))?;
        let count: usize = count.parse().map_err(|_| format!("bad repeat count `{item}`"))?;
        out.extend(std::iter::repeat_n(m, count));
    }
    Ok(out)
}

fn usage(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `Err` carries the payload of a certificate with a failed check.
fn certificate_outcome(cert: &FiberingCertificate) -> Result<Value, Value> {
    let v = cert.to_json();
    if cert.is_certified() {
        Ok(v)
    } else {
        Err(v)
    }
}

type Outcome = (&'static str, Value, Option<u64>, Result<Value, Value>);

fn run(command: &Command) -> Result<Outcome, String> {
    match command {
        Command::Ak { selection, variant_survey } => {
            let model = DoubleCoverModel::standard();
            let sel = match selection {
                Selection::Default => GeneratorSelection::default_selection(&model),
                Selection::Minimal => GeneratorSelection::minimal_selection(&model),
            };
            let params = json!({ "selection": selection, "variant_survey": variant_survey, "words": sel.texts() });
            if *variant_survey {
                let rows = lift_variant_survey(&sel, &model).map_err(usage)?;
                return Ok(("ak", params, None, Ok(json!({ "survey": rows }))));
            }
            let cert = ak_certificate(&sel, &model).map_err(usage)?;
            Ok(("ak", params, None, certificate_outcome(&cert)))
        }
        Command::Salter { genus, trials, seed } => {
            let cert = no_fifth_fibering_check(*genus as usize, *trials, *seed).map_err(usage)?;
            let params = json!({ "genus": genus, "trials": trials });
            let outcome = if *trials == 0 && cert.all_passed() {
                Ok(cert.to_json())
            } else {
                certificate_outcome(&cert)
            };
            Ok(("salter", params, Some(*seed), outcome))
        }
        Command::Cover { spec } => {
            let parsed = ProductCoverSpec::load(spec).map_err(usage)?;
            let data = cover_h1_data(&parsed).map_err(usage)?;
            let cert = cover_certificate(&parsed).map_err(usage)?;
            let params = json!({ "spec": spec.display().to_string() });
            let payload = |c: Value| json!({ "h1": data, "certificate": c });
            let outcome = certificate_outcome(&cert).map(payload).map_err(payload);
            Ok(("cover", params, None, outcome))
        }
        Command::Rh { base_genus, degree, branch } => {
            let mults = parse_branch(branch)?;
            let genus = riemann_hurwitz_genus(*base_genus, *degree, &mults).map_err(usage)?;
            let params = json!({ "base_genus": base_genus, "degree": degree, "branch": branch });
            Ok(("rh", params, None, Ok(json!({ "branch_points": mults.len(), "genus": genus }))))
        }
        Command::Rs { genus, mod2 } => {
            if *genus == 0 {
                return Err("genus must be at least 1".into());
            }
            if *genus > 4 && *mod2 {
                return Err("the mod-2 cover is limited to genus ≤ 4".into());
            }
            let pres = SurfacePresentation::closed(*genus);
            let quotient = if *mod2 {
                mod2_homology_cover(*genus)
            } else {
                FiniteQuotient::trivial(&pres.presentation)
            };
            let sub = reidemeister_schreier(&pres, &quotient).map_err(usage)?;
            let b1 = abelianized_rank(&sub);
            let params = json!({ "genus": genus, "mod2": mod2 });
            Ok((
                "rs",
                params,
                None,
                Ok(json!({
                    "index": sub.index,
                    "generators": sub.generator_count(),
                    "relators": sub.relator_count(),
                    "b1": b1,
                    "genus": b1 / 2,
                })),
            ))
        }
    }
}

fn render_certificate(c: &Value, out: &mut String) {
    out.push_str(&format!("manifold: {}\n", c["manifold"].as_str().unwrap_or("?")));
    for check in c["checks"].as_array().into_iter().flatten() {
        let status = check["status"].as_str().unwrap_or("?").to_uppercase();
        out.push_str(&format!("  [{status}] {}\n", check["name"].as_str().unwrap_or("?")));
    }
    if let Some(dims) = c["dims"].as_object() {
        let parts: Vec<String> = dims.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("dims: {}\n", parts.join(" ")));
    }
    for a in c["axioms"].as_array().into_iter().flatten() {
        out.push_str(&format!("axiom: {}\n", a.as_str().unwrap_or("?")));
    }
    match c["conclusion"].as_object() {
        Some(conc) => {
            if let Some(fib) = conc.get("fib").and_then(Value::as_u64) {
                out.push_str(&format!("Fib = {fib}\n"));
            }
            out.push_str(&format!("conclusion: {}\n", conc["statement"].as_str().unwrap_or("?")));
            for n in conc["notes"].as_array().into_iter().flatten() {
                out.push_str(&format!("note: {}\n", n.as_str().unwrap_or("?")));
            }
        }
        None => out.push_str("conclusion: none\n"),
    }
}

fn render_text(command: &str, payload: &Value) -> String {
    let mut out = String::new();
    match command {
        "ak" if payload.get("survey").is_some() => {
            out.push_str("sign  sigma-twisted words                    invariant  b1\n");
            for row in payload["survey"].as_array().into_iter().flatten() {
                let twisted: Vec<&str> = row["sigma_twisted"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .filter_map(Value::as_str)
                    .collect();
                out.push_str(&format!(
                    "{:<5} {:<40} {:>9}  {}\n",
                    row["sign"].as_str().unwrap_or("?"),
                    if twisted.is_empty() { "-".to_string() } else { twisted.join("; ") },
                    row["invariant_dim"],
                    row["b1_total"]
                ));
            }
        }
        "ak" | "salter" => render_certificate(payload, &mut out),
        "cover" => {
            let h = &payload["h1"];
            out.push_str(&format!(
                "index {}: b1(Im p1) = {}, b1(Im p2) = {}, b1(E) = {}\n",
                h["index"], h["b1_im1"], h["b1_im2"], h["b1_total"]
            ));
            render_certificate(&payload["certificate"], &mut out);
        }
        _ => {
            if let Some(obj) = payload.as_object() {
                for (k, v) in obj {
                    out.push_str(&format!("{k}: {v}\n"));
                }
            }
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (command, parameters, seed, outcome) = match run(&cli.command) {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let (payload, code) = match outcome {
        Ok(p) => (p, 0),
        Err(p) => (p, 1),
    };
    let timing = cli
        .timing
        .then(|| json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1000.0 }));
    let mut text;
    if cli.json {
        let envelope = ReportEnvelope {
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            parameters,
            seed,
            payload,
            timing,
        };
        text = serde_json::to_string_pretty(&envelope).expect("report serializes");
        text.push('\n');
    } else {
        text = render_text(command, &payload);
        if let Some(t) = timing {
            text.push_str(&format!("elapsed: {:.1} ms\n", t["elapsed_ms"].as_f64().unwrap_or(0.0)));
        }
    }
    // A closed pipe (e.g. `| head`) is not an error for a report writer.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(code)
}
