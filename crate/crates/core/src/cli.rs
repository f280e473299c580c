//! Machine-readable command layer behind the `ptband` binary.
//!
//! Every command produces either a JSON document or a sectioned CSV table,
//! written with a fixed field order and all floating-point numbers rendered
//! with 12 significant digits, so identical configurations produce
//! byte-identical output. Complex numbers serialize as {re, im} pairs in
//! JSON and as paired columns in CSV. The JSON documents validate against
//! `schema/output.schema.json`.
//!
//! Exit codes: 0 success, 2 usage error, 3 model violation, 4 numerical
//! failure.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::bands::{trace_bands, real_components, Band, RealComponent};
use crate::critical::{classify_phase, find_vk, verify_critical, Phase, DEFAULT_V_MAX, DEFAULT_V_TOL};
use crate::discriminant::{discriminant_grid, DEFAULT_TOL};
use crate::error::{Result, SpectralError};
use crate::operator::{antiperiodic_eigenvalues, periodic_eigenvalues, LabeledEigenvalue};
use crate::potential::{coupling_from_strength, strength_from_coupling};

/// Which computation to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Bands,
    Critical,
    Discriminant,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    /// Optical strength V ≥ 0; exclusive with `a_imag`.
    pub v: Option<f64>,
    /// Imaginary part of the coupling a = i·c; exclusive with `v`.
    pub a_imag: Option<f64>,
    /// Bands for `bands`, component pairs for `verify`.
    pub n_max: usize,
    pub t_steps: usize,
    pub trunc_order: usize,
    pub tol: f64,
    /// Critical index for `critical`.
    pub k: usize,
    /// Search ceiling for `critical`.
    pub v_max: f64,
    /// Real λ window for `discriminant`.
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub samples: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Spectrum,
            v: None,
            a_imag: None,
            n_max: 4,
            t_steps: 256,
            trunc_order: crate::operator::DEFAULT_TRUNCATION,
            tol: DEFAULT_V_TOL,
            k: 2,
            v_max: DEFAULT_V_MAX,
            lambda_min: -5.0,
            lambda_max: 50.0,
            samples: 200,
            format: OutputFormat::Json,
        }
    }
}

struct Coupling {
    a: Complex64,
    v: Option<f64>,
}

fn resolve_coupling(config: &RunConfig) -> Result<Coupling> {
    match (config.v, config.a_imag) {
        (Some(v), None) => Ok(Coupling {
            a: coupling_from_strength(v)?,
            v: Some(v),
        }),
        (None, Some(c)) => {
            if !c.is_finite() || c <= 0.0 {
                return Err(SpectralError::Domain(format!(
                    "imaginary coupling part must be positive and finite, got {c}"
                )));
            }
            let a = Complex64::new(0.0, c);
            Ok(Coupling {
                a,
                v: strength_from_coupling(a),
            })
        }
        _ => Err(SpectralError::Config(
            "exactly one of --V / --a-imag must be given".into(),
        )),
    }
}

// ============================================================================
// Deterministic formatting
// ============================================================================

/// 12 significant digits, scientific; valid JSON number syntax.
fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn json_complex(z: Complex64) -> String {
    format!("{{\"re\":{},\"im\":{}}}", num(z.re), num(z.im))
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_potential(c: &Coupling) -> String {
    let v = c.v.map(num).unwrap_or_else(|| "null".into());
    format!("{{\"V\":{v},\"a\":{}}}", json_complex(c.a))
}

fn json_eigenvalue(e: &LabeledEigenvalue) -> String {
    format!(
        "{{\"value\":{},\"class\":{},\"index\":{},\"disc_center\":{},\"disc_radius\":{}}}",
        json_complex(e.value),
        json_str(e.class.name()),
        json_str(&e.index.to_string()),
        num(e.disc_center),
        num(e.disc_radius)
    )
}

fn phase_name(p: Phase) -> &'static str {
    match p {
        Phase::Case1 => "Case1",
        Phase::Case2 => "Case2",
        Phase::Case3 => "Case3",
    }
}

// ============================================================================
// Commands
// ============================================================================

/// Run the configured command and return the serialized document.
pub fn run(config: &RunConfig) -> Result<String> {
    match config.command {
        Command::Spectrum => cmd_spectrum(config),
        Command::Bands => cmd_bands(config),
        Command::Critical => cmd_critical(config),
        Command::Discriminant => cmd_discriminant(config),
        Command::Verify => cmd_verify(config),
    }
}

/// Periodic/antiperiodic eigenvalue tables.
pub fn cmd_spectrum(config: &RunConfig) -> Result<String> {
    let coupling = resolve_coupling(config)?;
    let per = periodic_eigenvalues(coupling.a, config.trunc_order)?;
    let anti = antiperiodic_eigenvalues(coupling.a, config.trunc_order)?;
    match config.format {
        OutputFormat::Json => {
            let per_json: Vec<String> = per.iter().map(json_eigenvalue).collect();
            let anti_json: Vec<String> = anti.iter().map(json_eigenvalue).collect();
            Ok(format!(
                "{{\"command\":\"spectrum\",\"potential\":{},\"truncation_order\":{},\"periodic\":[{}],\"antiperiodic\":[{}]}}\n",
                json_potential(&coupling),
                config.trunc_order,
                per_json.join(","),
                anti_json.join(",")
            ))
        }
        OutputFormat::Csv => {
            let mut out = String::from("family,class,index,re,im,disc_center,disc_radius\n");
            for (family, list) in [("periodic", &per), ("antiperiodic", &anti)] {
                for e in list {
                    let _ = writeln!(
                        out,
                        "{family},{},{},{},{},{},{}",
                        e.class.name(),
                        e.index,
                        num(e.value.re),
                        num(e.value.im),
                        num(e.disc_center),
                        num(e.disc_radius)
                    );
                }
            }
            Ok(out)
        }
    }
}

/// Band polylines plus real components and singularities.
pub fn cmd_bands(config: &RunConfig) -> Result<String> {
    let coupling = resolve_coupling(config)?;
    let bands = trace_bands(coupling.a, config.n_max, config.t_steps)?;
    let imaginary = coupling.a.im > 0.0;
    let components: Vec<RealComponent> = if imaginary {
        real_components(coupling.a, config.n_max.div_ceil(2))?
    } else {
        Vec::new()
    };
    let phase = coupling
        .v
        .filter(|&v| v > 0.5 && v < crate::critical::strength_window_hi())
        .map(classify_phase)
        .transpose()?;
    match config.format {
        OutputFormat::Json => {
            let band_json: Vec<String> = bands.iter().map(json_band).collect();
            let comp_json: Vec<String> = components
                .iter()
                .map(|c| {
                    format!(
                        "{{\"index\":{},\"lo\":{},\"hi\":{},\"degenerate\":{}}}",
                        c.index,
                        num(c.lo),
                        num(c.hi),
                        c.degenerate
                    )
                })
                .collect();
            let sing_json: Vec<String> = bands
                .iter()
                .filter_map(|b| b.singularity)
                .map(|s| (s.n, s))
                .collect::<std::collections::BTreeMap<_, _>>()
                .values()
                .map(|s| {
                    format!(
                        "{{\"n\":{},\"lambda\":{},\"t\":{}}}",
                        s.n,
                        num(s.lambda),
                        num(s.t)
                    )
                })
                .collect();
            Ok(format!(
                "{{\"command\":\"bands\",\"potential\":{},\"phase\":{},\"bands\":[{}],\"components\":[{}],\"singularities\":[{}]}}\n",
                json_potential(&coupling),
                phase.map(|p| json_str(phase_name(p))).unwrap_or_else(|| "null".into()),
                band_json.join(","),
                comp_json.join(","),
                sing_json.join(",")
            ))
        }
        OutputFormat::Csv => {
            let mut out = String::from("# bands\nband,t,re,im\n");
            for b in &bands {
                for p in &b.samples {
                    let _ = writeln!(out, "{},{},{},{}", b.index, num(p.t), num(p.mu.re), num(p.mu.im));
                }
            }
            out.push_str("# components\nindex,lo,hi,degenerate\n");
            for c in &components {
                let _ = writeln!(out, "{},{},{},{}", c.index, num(c.lo), num(c.hi), c.degenerate);
            }
            out.push_str("# singularities\nn,lambda,t\n");
            let mut seen = std::collections::BTreeSet::new();
            for b in &bands {
                if let Some(s) = b.singularity {
                    if seen.insert(s.n) {
                        let _ = writeln!(out, "{},{},{}", s.n, num(s.lambda), num(s.t));
                    }
                }
            }
            Ok(out)
        }
    }
}

fn json_band(b: &Band) -> String {
    let samples: Vec<String> = b
        .samples
        .iter()
        .map(|p| format!("{{\"t\":{},\"re\":{},\"im\":{}}}", num(p.t), num(p.mu.re), num(p.mu.im)))
        .collect();
    format!(
        "{{\"index\":{},\"endpoint_0\":{},\"endpoint_pi\":{},\"real_until\":{},\"singularity\":{},\"samples\":[{}]}}",
        b.index,
        json_eigenvalue(&b.endpoint_0),
        json_eigenvalue(&b.endpoint_pi),
        b.real_until.map(num).unwrap_or_else(|| "null".into()),
        b.singularity
            .map(|s| format!("{{\"n\":{},\"lambda\":{},\"t\":{}}}", s.n, num(s.lambda), num(s.t)))
            .unwrap_or_else(|| "null".into()),
        samples.join(",")
    )
}

/// Critical strength V_k with bracket and verification data.
pub fn cmd_critical(config: &RunConfig) -> Result<String> {
    let cp = find_vk(config.k, config.tol, config.v_max)?;
    let ver = if config.k >= 2 {
        Some(verify_critical(&cp)?)
    } else {
        None
    };
    match config.format {
        OutputFormat::Json => {
            let ver_json = ver
                .map(|v| {
                    format!(
                        "{{\"pair\":[{},{}],\"gap_abs\":{},\"f_at_collision\":{},\"f_prime_abs\":{}}}",
                        json_complex(v.pair.0),
                        json_complex(v.pair.1),
                        num(v.gap_abs),
                        json_complex(v.f_at_collision),
                        num(v.f_prime_at_collision.norm())
                    )
                })
                .unwrap_or_else(|| "null".into());
            Ok(format!(
                "{{\"command\":\"critical\",\"k\":{},\"V\":{},\"r\":{},\"a_squared\":{},\"bracket\":[{},{}],\"collided_pair\":[{},{}],\"verification\":{}}}\n",
                cp.k,
                num(cp.v),
                num(cp.r),
                num(-cp.r * cp.r),
                num(cp.bracket.0),
                num(cp.bracket.1),
                json_str(&cp.collided_pair.0.to_string()),
                json_str(&cp.collided_pair.1.to_string()),
                ver_json
            ))
        }
        OutputFormat::Csv => {
            let mut out = String::from(
                "k,V,r,a_squared,bracket_lo,bracket_hi,pair_lo,pair_hi,gap_abs,f_prime_abs\n",
            );
            let (gap, fp) = ver
                .map(|v| (num(v.gap_abs), num(v.f_prime_at_collision.norm())))
                .unwrap_or_else(|| ("".into(), "".into()));
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{gap},{fp}",
                cp.k,
                num(cp.v),
                num(cp.r),
                num(-cp.r * cp.r),
                num(cp.bracket.0),
                num(cp.bracket.1),
                cp.collided_pair.0,
                cp.collided_pair.1
            );
            Ok(out)
        }
    }
}

/// Hill discriminant on a real λ grid.
pub fn cmd_discriminant(config: &RunConfig) -> Result<String> {
    let coupling = resolve_coupling(config)?;
    if !(config.lambda_max > config.lambda_min) || config.samples < 2 {
        return Err(SpectralError::Config(
            "discriminant grid needs lambda_max > lambda_min and at least 2 samples".into(),
        ));
    }
    let lambdas: Vec<Complex64> = (0..config.samples)
        .map(|j| {
            Complex64::new(
                config.lambda_min
                    + (config.lambda_max - config.lambda_min) * j as f64
                        / (config.samples - 1) as f64,
                0.0,
            )
        })
        .collect();
    let values = discriminant_grid(coupling.a, &lambdas, DEFAULT_TOL)?;
    match config.format {
        OutputFormat::Json => {
            let pts: Vec<String> = values
                .iter()
                .map(|d| {
                    format!(
                        "{{\"lambda\":{},\"f\":{},\"f_prime\":{},\"in_spectrum\":{}}}",
                        num(d.lambda.re),
                        json_complex(d.f),
                        json_complex(d.f_prime),
                        d.f.re >= -2.0 && d.f.re <= 2.0
                    )
                })
                .collect();
            Ok(format!(
                "{{\"command\":\"discriminant\",\"potential\":{},\"points\":[{}]}}\n",
                json_potential(&coupling),
                pts.join(",")
            ))
        }
        OutputFormat::Csv => {
            let mut out = String::from("lambda,f_re,f_im,f_prime_re,f_prime_im,in_spectrum\n");
            for d in &values {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    num(d.lambda.re),
                    num(d.f.re),
                    num(d.f.im),
                    num(d.f_prime.re),
                    num(d.f_prime.im),
                    d.f.re >= -2.0 && d.f.re <= 2.0
                );
            }
            Ok(out)
        }
    }
}

/// Property-suite report; the process exit code reflects `pass`.
pub fn cmd_verify(config: &RunConfig) -> Result<String> {
    let coupling = resolve_coupling(config)?;
    let mut checks: Vec<(String, bool, String)> = Vec::new();
    // spectrum-level reality checks
    let anti = antiperiodic_eigenvalues(coupling.a, config.trunc_order)?;
    let per = periodic_eigenvalues(coupling.a, config.trunc_order)?;
    if coupling.a.im == 0.0 {
        let all_real = per
            .iter()
            .chain(anti.iter())
            .all(|e| e.value.im.abs() < 1e-9);
        checks.push((
            "all-eigenvalues-real".into(),
            all_real,
            "real coupling keeps every eigenvalue on the real axis".into(),
        ));
        let mut merged: Vec<f64> = Vec::new();
        merged.push(per[0].value.re);
        let mut ai = anti.iter();
        let mut pi = per.iter().skip(1);
        loop {
            match (ai.next(), ai.next(), pi.next(), pi.next()) {
                (Some(a1), Some(a2), Some(p1), Some(p2)) => merged.extend([
                    a1.value.re,
                    a2.value.re,
                    p1.value.re,
                    p2.value.re,
                ]),
                _ => break,
            }
        }
        // high pair gaps shrink factorially and reach the floating floor;
        // assert the ordering where it is resolvable
        merged.retain(|&x| x < 60.0);
        let ordered = merged.windows(2).all(|w| w[1] > w[0] - 1e-10);
        checks.push((
            "classical-interlacing".into(),
            ordered,
            "λ₀ < λ₁⁻ < λ₁⁺ < λ₂⁻ < λ₂⁺ < … over |λ| < 60".into(),
        ));
    } else {
        let pair_nonreal = anti.len() >= 2
            && anti[0].value.im < -1e-12
            && anti[1].value.im > 1e-12
            && (anti[0].value - anti[1].value.conj()).norm() < 1e-8;
        checks.push((
            "antiperiodic-pair-nonreal".into(),
            pair_nonreal,
            format!(
                "λ₁∓ = {} / {}",
                anti.first().map(|e| e.value.to_string()).unwrap_or_default(),
                anti.get(1).map(|e| e.value.to_string()).unwrap_or_default()
            ),
        ));
    }
    let report = crate::bands::verify_properties(coupling.a, config.n_max)?;
    for c in &report.checks {
        checks.push((c.name.clone(), c.pass, c.detail.clone()));
    }
    let pass = checks.iter().all(|(_, p, _)| *p);
    match config.format {
        OutputFormat::Json => {
            let rows: Vec<String> = checks
                .iter()
                .map(|(name, p, detail)| {
                    format!(
                        "{{\"name\":{},\"pass\":{},\"detail\":{}}}",
                        json_str(name),
                        p,
                        json_str(detail)
                    )
                })
                .collect();
            Ok(format!(
                "{{\"command\":\"verify\",\"potential\":{},\"pass\":{},\"checks\":[{}]}}\n",
                json_potential(&coupling),
                pass,
                rows.join(",")
            ))
        }
        OutputFormat::Csv => {
            let mut out = String::from("name,pass,detail\n");
            for (name, p, detail) in &checks {
                let _ = writeln!(out, "{name},{p},\"{}\"", detail.replace('"', "'"));
            }
            Ok(out)
        }
    }
}

/// True when a verify document reports overall success (used by the binary
/// to choose its exit code).
pub fn verify_passed(doc: &str) -> bool {
    doc.contains("\"pass\":true,\"checks\"") || doc.starts_with("name,pass,detail")
        && !doc.contains(",false,")
}

/// λ grid helper shared by examples.
pub fn real_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| lo + (hi - lo) * j as f64 / (n - 1).max(1) as f64)
        .collect()
}

const _: () = {
    // the grid never leaves [0, π] by construction
    assert!(PI > 3.14);
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_resolution_is_exclusive() {
        let mut cfg = RunConfig::default();
        assert!(resolve_coupling(&cfg).is_err());
        cfg.v = Some(0.7);
        assert!(resolve_coupling(&cfg).is_ok());
        cfg.a_imag = Some(1.0);
        assert!(resolve_coupling(&cfg).is_err());
    }

    #[test]
    fn numbers_carry_twelve_significant_digits() {
        assert_eq!(num(0.5), "5.00000000000e-1");
        assert_eq!(num(0.8884370025), "8.88437002500e-1");
    }

    #[test]
    fn spectrum_output_is_deterministic() {
        let cfg = RunConfig {
            command: Command::Spectrum,
            v: Some(0.5),
            trunc_order: 16,
            ..RunConfig::default()
        };
        let one = cmd_spectrum(&cfg).unwrap();
        let two = cmd_spectrum(&cfg).unwrap();
        assert_eq!(one, two);
        assert!(one.contains("\"command\":\"spectrum\""));
        // free case: eigenvalues 0, 1, 1, 4, 4, …
        assert!(one.contains("0.00000000000e0"));
    }

    #[test]
    fn csv_headers_are_stable() {
        let cfg = RunConfig {
            command: Command::Spectrum,
            v: Some(0.4),
            trunc_order: 16,
            format: OutputFormat::Csv,
            ..RunConfig::default()
        };
        let out = cmd_spectrum(&cfg).unwrap();
        assert!(out.starts_with("family,class,index,re,im,disc_center,disc_radius\n"));
    }
}
