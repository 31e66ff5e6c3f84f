//! Report rendering in the three output formats.
//!
//! Probabilities always appear as a pair: the exact log2 value (the
//! authoritative one) and a "c×10^e" decimal string for reading next
//! to published figures.  JSON objects serialize with sorted keys and
//! floats in shortest round-trip form, so identical inputs yield
//! byte-identical output.

use std::fmt::Write as _;

use guessprob::bounds::{reference_note, BoundReport, FixedPoint, ProtocolParams, ReferenceRow};
use guessprob::numerics::Log2Prob;
use serde_json::{json, Value};

use crate::Format;

/// Attacker knowledge of the truncated key, for the optional bound.
pub struct KnownBits {
    pub t: u64,
    pub bound: Log2Prob,
}

fn prob_value(p: Log2Prob, digits: u8) -> Value {
    if p.is_zero() {
        json!({ "log2": Value::Null, "decimal": "0" })
    } else {
        json!({ "log2": p.log2(), "decimal": p.to_decimal_string(digits as usize) })
    }
}

fn prob_text(p: Log2Prob, digits: u8) -> String {
    if p.is_zero() {
        "0".to_string()
    } else {
        format!("{} (log2 {})", p.to_decimal_string(digits as usize), p.log2())
    }
}

fn decimal(p: Log2Prob, digits: u8) -> String {
    p.to_decimal_string(digits as usize)
}

fn params_value(params: &ProtocolParams, digits: u8) -> Value {
    json!({
        "n_total": params.n_tol(),
        "n_key": params.n_key(),
        "n_pe": params.n_pe(),
        "q_tol": params.q_tol(),
        "f": params.f(),
        "epsilon": prob_value(params.eps_target(), digits),
    })
}

fn pretty(v: &Value) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("serializable value");
    text.push('\n');
    text
}

fn table_line(out: &mut String, label: &str, value: impl std::fmt::Display) {
    writeln!(out, "{label:<20}{value}").expect("write to string");
}

fn params_table(out: &mut String, params: &ProtocolParams, digits: u8) {
    table_line(out, "n_total", params.n_tol());
    table_line(out, "n_key", params.n_key());
    table_line(out, "n_pe", params.n_pe());
    table_line(out, "q_tol", params.q_tol());
    table_line(out, "f", params.f());
    table_line(out, "epsilon", prob_text(params.eps_target(), digits));
}

pub fn render_bound(
    params: &ProtocolParams,
    report: &BoundReport,
    known: Option<KnownBits>,
    format: Format,
    digits: u8,
) -> String {
    match format {
        Format::Json => {
            let mut v = json!({
                "schema_version": 1,
                "params": params_value(params, digits),
                "n1": report.n1,
                "eps_key": prob_value(report.eps_k, digits),
                "baseline_bound": prob_value(report.baseline_bound, digits),
                "n2": report.n2,
                "eps_kprime": prob_value(report.eps_kprime, digits),
                "fixed_point_bound": match report.fixed_point_bound {
                    Some(b) => prob_value(b, digits),
                    None => Value::Null,
                },
                "rate_r": report.rate_r,
                "rate_rprime": report.rate_rprime,
            });
            if let Some(kb) = &known {
                v["known_bits"] = json!({ "t": kb.t, "bound": prob_value(kb.bound, digits) });
            }
            pretty(&v)
        }
        Format::Csv => {
            let mut header = "n_total,n_key,n_pe,q_tol,f,epsilon_log2,epsilon,n1,\
                 baseline_bound_log2,baseline_bound,n2,eps_kprime_log2,eps_kprime,\
                 fixed_point_bound_log2,fixed_point_bound,rate_r,rate_rprime"
                .to_string();
            let (fp_log2, fp_decimal) = match report.fixed_point_bound {
                Some(b) => (b.log2().to_string(), decimal(b, digits)),
                None => (String::new(), String::new()),
            };
            let mut row = format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                params.n_tol(),
                params.n_key(),
                params.n_pe(),
                params.q_tol(),
                params.f(),
                params.eps_target().log2(),
                decimal(params.eps_target(), digits),
                report.n1,
                report.baseline_bound.log2(),
                decimal(report.baseline_bound, digits),
                report.n2,
                report.eps_kprime.log2(),
                decimal(report.eps_kprime, digits),
                fp_log2,
                fp_decimal,
                report.rate_r,
                report.rate_rprime,
            );
            if let Some(kb) = &known {
                header.push_str(",known_bits_t,known_bits_bound_log2,known_bits_bound");
                write!(row, ",{},{},{}", kb.t, kb.bound.log2(), decimal(kb.bound, digits))
                    .expect("write to string");
            }
            format!("{header}\n{row}\n")
        }
        Format::Table => {
            let mut out = String::new();
            params_table(&mut out, params, digits);
            table_line(&mut out, "n1", report.n1);
            table_line(&mut out, "baseline_bound", prob_text(report.baseline_bound, digits));
            table_line(&mut out, "n2", report.n2);
            table_line(&mut out, "eps_kprime", prob_text(report.eps_kprime, digits));
            match report.fixed_point_bound {
                Some(b) => table_line(&mut out, "fixed_point_bound", prob_text(b, digits)),
                None => table_line(&mut out, "fixed_point_bound", "not applicable (n1 <= n2)"),
            }
            if let Some(kb) = &known {
                table_line(&mut out, "known_bits_t", kb.t);
                table_line(&mut out, "known_bits_bound", prob_text(kb.bound, digits));
            }
            table_line(&mut out, "rate_r", report.rate_r);
            table_line(&mut out, "rate_rprime", report.rate_rprime);
            out
        }
    }
}

pub fn render_fixed_point(
    params: &ProtocolParams,
    fp: &FixedPoint,
    format: Format,
    digits: u8,
) -> String {
    match format {
        Format::Json => pretty(&json!({
            "schema_version": 1,
            "params": params_value(params, digits),
            "n2": fp.n2,
            "eps_kprime": prob_value(fp.eps_kprime, digits),
            "fixed_point_real": fp.root,
        })),
        Format::Csv => format!(
            "n_total,n_key,n_pe,q_tol,f,epsilon_log2,epsilon,n2,eps_kprime_log2,\
             eps_kprime,fixed_point_real\n{},{},{},{},{},{},{},{},{},{},{}\n",
            params.n_tol(),
            params.n_key(),
            params.n_pe(),
            params.q_tol(),
            params.f(),
            params.eps_target().log2(),
            decimal(params.eps_target(), digits),
            fp.n2,
            fp.eps_kprime.log2(),
            decimal(fp.eps_kprime, digits),
            fp.root,
        ),
        Format::Table => {
            let mut out = String::new();
            params_table(&mut out, params, digits);
            table_line(&mut out, "n2", fp.n2);
            table_line(&mut out, "eps_kprime", prob_text(fp.eps_kprime, digits));
            table_line(&mut out, "fixed_point_real", fp.root);
            out
        }
    }
}

/// The displayed security level 10^-d in the log2 domain.
fn pow10(exponent: i64) -> Log2Prob {
    Log2Prob::new(-(exponent as f64) * std::f64::consts::LOG2_10).expect("nonnegative exponent")
}

pub fn render_tables(rows: &[ReferenceRow], format: Format, digits: u8) -> String {
    let prior_a = Log2Prob::from_prob(1e-6).expect("constant");
    let prior_b = Log2Prob::from_prob(1e-9).expect("constant");
    match format {
        Format::Json => {
            let row_values: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "n_tol": row.n_tol,
                        "n1": row.report.n1,
                        "fixed_point_bound": match row.report.fixed_point_bound {
                            Some(b) => prob_value(b, digits),
                            None => Value::Null,
                        },
                        "eps_kprime": prob_value(row.report.eps_kprime, digits),
                        "eps_prime_pow10_exponent": row.eps_prime_pow10_exponent,
                        "eps_prime_pow10": prob_value(pow10(row.eps_prime_pow10_exponent), digits),
                        "n_prime": row.n_prime_at_pow10,
                        "n2": row.report.n2,
                        "rate_r": row.report.rate_r,
                        "rate_rprime": row.report.rate_rprime,
                        "rate_nprime": row.n_prime_at_pow10 as f64 / row.n_tol as f64,
                    })
                })
                .collect();
            pretty(&json!({
                "schema_version": 1,
                "note": reference_note(),
                "prior_bounds": {
                    "epsilon_1e6": prob_value(prior_a, digits),
                    "epsilon_1e9": prob_value(prior_b, digits),
                },
                "rows": row_values,
            }))
        }
        Format::Csv => {
            let mut out = "n_tol,n1,fixed_point_bound_log2,fixed_point_bound,eps_kprime_log2,\
                 eps_kprime,eps_prime_pow10_exponent,n_prime,n2,rate_r,rate_rprime,rate_nprime,\
                 prior_bound_1e6,prior_bound_1e9\n"
                .to_string();
            for row in rows {
                let (fp_log2, fp_decimal) = match row.report.fixed_point_bound {
                    Some(b) => (b.log2().to_string(), decimal(b, digits)),
                    None => (String::new(), String::new()),
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    row.n_tol,
                    row.report.n1,
                    fp_log2,
                    fp_decimal,
                    row.report.eps_kprime.log2(),
                    decimal(row.report.eps_kprime, digits),
                    row.eps_prime_pow10_exponent,
                    row.n_prime_at_pow10,
                    row.report.n2,
                    row.report.rate_r,
                    row.report.rate_rprime,
                    row.n_prime_at_pow10 as f64 / row.n_tol as f64,
                    decimal(prior_a, digits),
                    decimal(prior_b, digits),
                )
                .expect("write to string");
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            writeln!(
                out,
                "{:<9} {:<8} {:<17} {:<16} {:<9} {:<8} {:<7} {:<9} {}",
                "N_tol", "n1", "bound", "eps_kprime", "10^-d", "n_prime", "n2", "r", "r_prime"
            )
            .expect("write to string");
            for row in rows {
                let bound = match row.report.fixed_point_bound {
                    Some(b) => decimal(b, digits),
                    None => "n/a".to_string(),
                };
                writeln!(
                    out,
                    "{:<9} {:<8} {:<17} {:<16} {:<9} {:<8} {:<7} {:<9} {}",
                    row.n_tol,
                    row.report.n1,
                    bound,
                    decimal(row.report.eps_kprime, digits),
                    format!("10^-{}", row.eps_prime_pow10_exponent),
                    row.n_prime_at_pow10,
                    row.report.n2,
                    row.report.rate_r,
                    row.report.rate_rprime,
                )
                .expect("write to string");
            }
            writeln!(
                out,
                "\nprior bounds for comparison: {} and {}",
                decimal(prior_a, digits),
                decimal(prior_b, digits)
            )
            .expect("write to string");
            writeln!(out, "\nnote: {}", reference_note()).expect("write to string");
            out
        }
    }
}
