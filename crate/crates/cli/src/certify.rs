use crate::output::{document, file_name, mode_note, write};
use anyhow::Result;
use clap::ValueEnum;
use genus_cantor::ladder::Construction;
use genus_cantor::maps::{check_conjugation, check_folding_invariance};
use genus_cantor::verify::{
    certify_linking, certify_nesting, certify_sigma_dichotomy, certify_tau_proximity, certify_tau_separation,
    genus_structure_certificate, Certificate, LinkingOptions, NestingOptions, Status,
};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    Sigma,
    TauSep,
    TauProx,
    Linking,
    Nesting,
    GenusStructure,
    Folding,
    Conjugation,
}

impl Lemma {
    pub fn name(self) -> &'static str {
        match self {
            Lemma::Sigma => "sigma",
            Lemma::TauSep => "tau-sep",
            Lemma::TauProx => "tau-prox",
            Lemma::Linking => "linking",
            Lemma::Nesting => "nesting",
            Lemma::GenusStructure => "genus-structure",
            Lemma::Folding => "folding",
            Lemma::Conjugation => "conjugation",
        }
    }
}

pub struct Settings {
    pub depth: usize,
    pub h: f64,
    pub pair_budget: Option<usize>,
}

impl Settings {
    fn linking(&self) -> LinkingOptions {
        match self.pair_budget {
            Some(b) => LinkingOptions::sampled(b / 2, b - b / 2),
            None => LinkingOptions::default(),
        }
    }
}

#[derive(Serialize)]
struct Body<'a> {
    certificate: &'a Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    linking_matrix: Option<String>,
}

fn run(c: &Construction, lemma: Lemma, s: &Settings, dir: &Path) -> Result<(Certificate, Option<String>)> {
    let (g, n) = (c.g(), c.n());
    let figure = !c.ladder.seq.is_admissible();
    let mut csv = None;
    let cert = match lemma {
        Lemma::Sigma => certify_sigma_dichotomy(c),
        Lemma::TauSep => certify_tau_separation(c),
        Lemma::TauProx => certify_tau_proximity(c),
        Lemma::Linking => {
            let (cert, m) = certify_linking(c, &s.linking());
            let name = file_name("linking-matrix", g, n, s.depth, "csv");
            write(dir, &name, &m.to_csv())?;
            csv = Some(name);
            cert
        }
        Lemma::Nesting => certify_nesting(c, &NestingOptions { h: s.h }),
        Lemma::GenusStructure => genus_structure_certificate(c, s.depth, &s.linking()),
        Lemma::Folding if g % 2 == 0 => check_folding_invariance(c)?.0,
        Lemma::Folding => Certificate::not_applicable("folding-invariance", g, n, figure, "folding needs even genus"),
        Lemma::Conjugation => check_conjugation(1000, 0x5eed),
    };
    Ok((cert, csv))
}

fn short(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.4e}"))
}

/// Runs the lemmas, writes one JSON file each and prints a table. Returns
/// whether nothing failed or stayed inconclusive.
pub fn certify(c: &Construction, lemmas: &[Lemma], s: &Settings, dir: &Path) -> Result<bool> {
    let seq = &c.ladder.seq;
    let mut out = std::io::stdout().lock();
    writeln!(out, "genus {} at N = {}: {}", c.g(), c.n(), mode_note(seq))?;
    writeln!(out, "{:<18} {:<15} {:>12} {:>10}  witness", "lemma", "status", "margin", "ms")?;
    let mut ok = true;
    for &lemma in lemmas {
        let (cert, csv) = run(c, lemma, s, dir)?;
        let body = Body { certificate: &cert, linking_matrix: csv };
        write(dir, &file_name(lemma.name(), c.g(), c.n(), s.depth, "json"), &document(seq, &body)?)?;
        let status = serde_json::to_value(cert.status)?.as_str().unwrap_or("?").to_string();
        let witness = cert.witness.as_ref().map_or(String::new(), |w| {
            format!("{:?} {:?} achieved {:.4e} required {:.4e} ({})", w.first, w.second, w.achieved, w.required, w.detail)
        });
        writeln!(out, "{:<18} {:<15} {:>12} {:>10}  {}", cert.lemma, status, short(cert.margin), cert.elapsed_ms, witness)?;
        ok &= matches!(cert.status, Status::Pass | Status::NotApplicable);
    }
    Ok(ok)
}
