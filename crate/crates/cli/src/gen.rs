use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use qlext_core::gen::{gen_random, reduce_mcc, DeletionPolicy, MccInstance, RandomGenConfig};
use qlext_core::io::InstanceFile;
use qlext_core::Error;
use serde_json::json;

use crate::{read, EXIT_OK};

#[derive(Debug, Subcommand)]
pub(crate) enum GenCommand {
    /// Random partial layout with some vertices and edges removed.
    Random(RandomArgs),
    /// Clique-reduction instance from a colored graph.
    Mcc(MccArgs),
}

#[derive(Debug, Args)]
pub(crate) struct RandomArgs {
    #[arg(long, default_value_t = RandomGenConfig::default().vertex_count)]
    vertices: usize,
    #[arg(long, default_value_t = RandomGenConfig::default().edge_probability)]
    edge_prob: f64,
    #[arg(long, default_value_t = RandomGenConfig::default().page_count)]
    pages: usize,
    /// Vertices removed from G to form H.
    #[arg(long, default_value_t = RandomGenConfig::default().deletion.vertices)]
    delete_vertices: usize,
    /// Further edges removed from G to form H.
    #[arg(long, default_value_t = RandomGenConfig::default().deletion.edges)]
    delete_edges: usize,
    /// Re-randomize H's layout, so the instance may become unsolvable.
    #[arg(long)]
    scramble: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
pub(crate) struct MccArgs {
    /// Edge list: one `a b` pair per line; `#` starts a comment.
    edges: PathBuf,
    /// Coloring: one `vertex color` pair per line, colors `1..=k`.
    #[arg(long)]
    coloring: PathBuf,
    /// Give every page its own guard vertices so that H has no parallel edges.
    #[arg(long)]
    simple: bool,
}

pub(crate) fn cmd_gen(cmd: &GenCommand, out: &mut dyn Write) -> Result<i32, Error> {
    let file = match cmd {
        GenCommand::Random(args) => random_file(args)?,
        GenCommand::Mcc(args) => mcc_file(args)?,
    };
    out.write_all(file.to_json().as_bytes())
        .map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(EXIT_OK)
}

fn random_file(args: &RandomArgs) -> Result<InstanceFile, Error> {
    let cfg = RandomGenConfig {
        vertex_count: args.vertices,
        edge_probability: args.edge_prob,
        page_count: args.pages,
        deletion: DeletionPolicy {
            vertices: args.delete_vertices,
            edges: args.delete_edges,
        },
        scramble_h: args.scramble,
        seed: args.seed,
    };
    let generated = gen_random(&cfg)?;
    let meta = json!({
        "generator": "random",
        "seed": args.seed,
        "known_solvable": generated.known_solvable,
    });
    Ok(InstanceFile::from_instance(&generated.instance, Some(meta)))
}

fn records(path: &Path) -> Result<Vec<(usize, Vec<String>)>, Error> {
    Ok(read(path)?
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("")))
        .map(|(i, line)| (i, line.split_whitespace().map(str::to_string).collect::<Vec<_>>()))
        .filter(|(_, fields)| !fields.is_empty())
        .collect())
}

fn mcc_file(args: &MccArgs) -> Result<InstanceFile, Error> {
    let at = |path: &Path, line: usize, msg: &str| Error::parse(format!("{}:{line}", path.display()), msg);
    let mut names = Vec::new();
    let mut colors = Vec::new();
    for (line, fields) in records(&args.coloring)? {
        let [name, color] = fields.as_slice() else {
            return Err(at(&args.coloring, line, "expected `vertex color`"));
        };
        let color: usize = color.parse().map_err(|_| at(&args.coloring, line, "color must be a positive integer"))?;
        names.push(name.clone());
        colors.push(color);
    }
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut edges = Vec::new();
    for (line, fields) in records(&args.edges)? {
        let [a, b] = fields.as_slice() else {
            return Err(at(&args.edges, line, "expected `a b`"));
        };
        let find = |n: &String| {
            index
                .get(n.as_str())
                .copied()
                .ok_or_else(|| at(&args.edges, line, &format!("vertex `{n}` has no color")))
        };
        edges.push((find(a)?, find(b)?));
    }
    let k = colors.iter().copied().max().unwrap_or(0);
    let mcc = MccInstance::new(names.clone(), edges, k, colors)?;
    let art = reduce_mcc(&mcc, args.simple)?;
    let pages: serde_json::Map<String, serde_json::Value> = art
        .source_edges
        .iter()
        .zip(&art.page_of_edge)
        .map(|(&(a, b), &p)| (format!("{}--{}", names[a], names[b]), json!(p + 1)))
        .collect();
    let meta = json!({
        "generator": "mcc",
        "simple": args.simple,
        "k": k,
        "edge_pages": pages,
        "pinning_page": art.dummy_page + 1,
        "clique_vertices": art.new_vertices.iter().map(|&v| art.instance.name(v)).collect::<Vec<_>>(),
    });
    Ok(InstanceFile::from_instance(&art.instance, Some(meta)))
}
