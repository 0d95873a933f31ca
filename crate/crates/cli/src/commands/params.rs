use std::fmt::Write as _;

use lee_toric::interleaver::{interleaved_params, InterleavedParams};
use lee_toric::toric::{code_params, ToricParams};
use serde::Serialize;

use crate::format::{decimal, decimal_f64, exact, OutputFormat};
use crate::{CliError, ParamsArgs, Report};

#[derive(Debug, Serialize)]
pub struct ParamsRecord {
    pub n: usize,
    pub q: u32,
    #[serde(rename = "N")]
    pub length: u64,
    pub k: u64,
    pub d: u32,
    pub t: u32,
    #[serde(rename = "R")]
    pub rate: f64,
    #[serde(rename = "G")]
    pub gain: f64,
    #[serde(rename = "R_exact")]
    pub rate_exact: String,
    #[serde(rename = "G_exact")]
    pub gain_exact: String,
    #[serde(rename = "Ni")]
    pub interleaved_length: u128,
    pub ki: u128,
    pub ti: u64,
    #[serde(rename = "Ri")]
    pub interleaved_rate: f64,
    #[serde(rename = "Gi")]
    pub interleaved_gain: f64,
    #[serde(rename = "Ri_exact")]
    pub interleaved_rate_exact: String,
    #[serde(rename = "Gi_exact")]
    pub interleaved_gain_exact: String,
}

impl ParamsRecord {
    pub fn new(t: &ToricParams, i: &InterleavedParams, digits: u32) -> Self {
        ParamsRecord {
            n: t.n,
            q: t.q,
            length: t.length,
            k: t.dimension,
            d: t.distance,
            t: t.capability,
            rate: decimal_f64(&t.rate, digits),
            gain: decimal_f64(&t.gain, digits),
            rate_exact: exact(&t.rate),
            gain_exact: exact(&t.gain),
            interleaved_length: i.length,
            ki: i.dimension,
            ti: i.capability,
            interleaved_rate: decimal_f64(&i.rate, digits),
            interleaved_gain: decimal_f64(&i.gain, digits),
            interleaved_rate_exact: exact(&i.rate),
            interleaved_gain_exact: exact(&i.gain),
        }
    }
}

pub fn run(args: &ParamsArgs) -> Result<Report, CliError> {
    let toric = code_params(args.n)?;
    let inter = interleaved_params(args.n)?;
    let digits = args.output.precision;
    let record = ParamsRecord::new(&toric, &inter, digits);
    let body = match args.output.format {
        OutputFormat::Json => serde_json::to_string_pretty(&record).expect("serializable") + "\n",
        OutputFormat::Csv => {
            let mut s = String::from("n,q,N,k,d,t,R,G,Ni,ki,ti,Ri,Gi\n");
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                toric.n,
                toric.q,
                toric.length,
                toric.dimension,
                toric.distance,
                toric.capability,
                decimal(&toric.rate, digits),
                decimal(&toric.gain, digits),
                inter.length,
                inter.dimension,
                inter.capability,
                decimal(&inter.rate, digits),
                decimal(&inter.gain, digits)
            )
            .unwrap();
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            writeln!(s, "n = {}, q = {}, alpha = {}", toric.n, toric.q, toric.dimension).unwrap();
            writeln!(
                s,
                "toric code        [[{},{},{}]]  t = {}  R = {}  G = {}",
                toric.length,
                toric.dimension,
                toric.distance,
                toric.capability,
                decimal(&toric.rate, digits),
                decimal(&toric.gain, digits)
            )
            .unwrap();
            writeln!(
                s,
                "interleaved code  [[{},{},t_i={}]]  R_i = {}  G_i = {}",
                inter.length,
                inter.dimension,
                inter.capability,
                decimal(&inter.rate, digits),
                decimal(&inter.gain, digits)
            )
            .unwrap();
            s
        }
    };
    Ok(Report::ok(body))
}
