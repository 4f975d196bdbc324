use crate::output::{document, file_name, write};
use anyhow::{bail, Result};
use clap::ValueEnum;
use genus_cantor::geometry::{Point3, Similarity};
use genus_cantor::ifs::{Ifs, LevelComponent, Word};
use genus_cantor::ladder::{build_torus, mesh_tube, Construction, TriMesh};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Largest number of components one export may enumerate.
pub const COMPONENT_CAP: u128 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    /// Core curves of every level-`depth` component, as JSON.
    Curves,
    /// Tube meshes of all levels `0..=depth`, as OBJ.
    Tubes,
    /// Tube meshes of the level-`depth` components (OBJ) with their maps (JSON).
    Level,
}

impl What {
    fn name(self) -> &'static str {
        match self {
            What::Curves => "curves",
            What::Tubes => "tubes",
            What::Level => "level",
        }
    }
}

pub struct ExportOptions {
    pub depth: usize,
    pub prefix: Option<Vec<usize>>,
    pub resolution: usize,
}

#[derive(Serialize)]
struct CurveComponent {
    word: Word,
    loops: Vec<Vec<[f64; 3]>>,
}

#[derive(Serialize)]
struct Curves {
    what: &'static str,
    g: usize,
    #[serde(rename = "N")]
    n: u64,
    depth: usize,
    components: Vec<CurveComponent>,
}

#[derive(Serialize)]
struct MapRecord {
    word: Word,
    scale: f64,
    rotation: [[f64; 3]; 3],
    translation: [f64; 3],
}

#[derive(Serialize)]
struct LevelManifest {
    what: &'static str,
    g: usize,
    #[serde(rename = "N")]
    n: u64,
    depth: usize,
    mesh_file: String,
    meshes: usize,
    euler_characteristic: i64,
    components: Vec<MapRecord>,
}

fn level(ifs: &Ifs, depth: usize, prefix: Option<&Word>) -> Result<Vec<LevelComponent>> {
    Ok(ifs.level(depth, prefix, COMPONENT_CAP)?.collect())
}

fn record(comp: &LevelComponent) -> MapRecord {
    let s: &Similarity = &comp.map;
    let t: Point3 = s.translation();
    MapRecord { word: comp.word.clone(), scale: s.scale(), rotation: *s.rotation(), translation: t.to_array() }
}

fn write_meshes(base: &TriMesh, comps: &[LevelComponent], out: &mut String) -> usize {
    let mut written = 0;
    for comp in comps {
        let letters: Vec<String> = comp.word.letters().iter().map(|l| l.to_string()).collect();
        let name = if letters.is_empty() { "T".to_string() } else { format!("T_{}", letters.join("_")) };
        base.transformed(&comp.map).write_obj(&name, written, out);
        written += base.vertex_count();
    }
    comps.len()
}

/// Writes the requested files and returns their paths.
pub fn export(c: &Construction, what: What, opts: &ExportOptions, dir: &Path) -> Result<Vec<PathBuf>> {
    let (g, n, seq) = (c.g(), c.n(), &c.ladder.seq);
    let ifs = Ifs::from_construction(c);
    let prefix = match &opts.prefix {
        Some(p) => Some(Word::new(p.clone(), ifs.m())?),
        None => None,
    };
    if let Some(p) = &prefix {
        if p.len() > opts.depth {
            bail!("prefix of length {} is deeper than depth {}", p.len(), opts.depth);
        }
    }
    let name = |ext: &str| file_name(what.name(), g, n, opts.depth, ext);
    let mut paths = Vec::new();
    match what {
        What::Curves => {
            let comps = level(&ifs, opts.depth, prefix.as_ref())?;
            let components = comps
                .iter()
                .map(|comp| CurveComponent {
                    word: comp.word.clone(),
                    loops: comp.core(&ifs).iter().map(|l| l.vertices().iter().map(|p| p.to_array()).collect()).collect(),
                })
                .collect();
            let body = Curves { what: "curves", g, n, depth: opts.depth, components };
            paths.push(write(dir, &name("json"), &document(seq, &body)?)?);
        }
        What::Tubes | What::Level => {
            let base = mesh_tube(&build_torus(&c.ladder), opts.resolution)?;
            let levels: Vec<usize> = if what == What::Tubes { (0..=opts.depth).collect() } else { vec![opts.depth] };
            let mut obj = format!("# {} g={g} N={n} depth={}\n", what.name(), opts.depth);
            let mut comps = Vec::new();
            for d in levels {
                let p = prefix.as_ref().filter(|p| p.len() <= d);
                comps.extend(level(&ifs, d, p)?);
            }
            let meshes = write_meshes(&base, &comps, &mut obj);
            let obj_name = name("obj");
            paths.push(write(dir, &obj_name, &obj)?);
            if what == What::Level {
                let body = LevelManifest {
                    what: "level",
                    g,
                    n,
                    depth: opts.depth,
                    mesh_file: obj_name,
                    meshes,
                    euler_characteristic: base.euler_characteristic(),
                    components: comps.iter().map(record).collect(),
                };
                paths.push(write(dir, &name("json"), &document(seq, &body)?)?);
            }
        }
    }
    Ok(paths)
}
