use clap::{Args, Parser, Subcommand};
use hdroute::experiment::{
    run_action_census, run_capacity_sweep, run_distribution_report, run_resilience, run_train,
    write_census, write_csv, write_report, write_resilience, ScenarioConfig,
};
use hdroute::graph::{degree_stats, write_edge_list};
use hdroute::routing::{build_table, NodeWeight};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hdroute", version, about = "Packet-level traffic simulation with hierarchical dynamic bypass routing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (flat TOML; see README for the grammar)
    #[arg(long)]
    config: PathBuf,
    /// Override the master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Override any config key, e.g. --set buffer=20 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn load(&self) -> hdroute::Result<ScenarioConfig> {
        let mut overrides = self.set.clone();
        if let Some(seed) = self.seed {
            overrides.push(format!("seed={seed}"));
        }
        if let Some(dir) = &self.out_dir {
            overrides.push(format!("out_dir=\"{}\"", dir.display()));
        }
        ScenarioConfig::load(&self.config, &overrides)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate the scenario's network and write it as an edge list
    GenGraph {
        #[command(flatten)]
        common: Common,
        /// Output file (default: <out_dir>/edges.txt)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a summary row: name,N,mean_degree,mean_sp_len,rsd,H
    Stats {
        #[command(flatten)]
        common: Common,
    },
    /// Write per-node degree and betweenness centrality
    Bc {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Routing table inspection
    Routes {
        #[command(subcommand)]
        cmd: RoutesCommand,
    },
    /// Train agents (first K, rate and seed of the scenario)
    Train {
        #[command(flatten)]
        common: Common,
    },
    /// Order-parameter sweep over the (strategy, K, R, seed) grid
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Converged action distributions P(beta) per agent and rate
    Census {
        #[command(flatten)]
        common: Common,
    },
    /// Link-removal experiment: control plus both removal modes
    Resilience {
        #[command(flatten)]
        common: Common,
    },
    /// Travel-time histograms and loss-versus-BC profiles
    Report {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum RoutesCommand {
    /// Dump a next-hop matrix as CSV (columns from,to,next)
    Export {
        #[command(flatten)]
        common: Common,
        /// Bypass exponent for the node-weight b(v)^beta
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> hdroute::Result<()> {
    match cli.command {
        Command::GenGraph { common, out } => {
            let cfg = common.load()?;
            let net = cfg.build_network(cfg.seeds[0])?;
            let path = out.unwrap_or_else(|| cfg.out_dir.join("edges.txt"));
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            write_edge_list(&net, &path)?;
            println!(
                "wrote {} ({} nodes, {} edges)",
                path.display(),
                net.node_count(),
                net.edge_count()
            );
        }
        Command::Stats { common } => {
            let cfg = common.load()?;
            let net = cfg.build_network(cfg.seeds[0])?;
            let s = degree_stats(&net);
            println!("name,N,mean_degree,mean_sp_len,rsd,H");
            println!(
                "{},{},{:.4},{:.4},{:.4},{:.4}",
                cfg.name,
                net.node_count(),
                s.mean_degree,
                s.mean_sp_len,
                s.rsd,
                s.heterogeneity
            );
        }
        Command::Bc { common, out } => {
            let cfg = common.load()?;
            let net = cfg.build_network(cfg.seeds[0])?;
            let bc = net.bc();
            let rows: Vec<String> = (0..net.node_count() as u32)
                .map(|v| format!("{},{},{}", v, net.degree(v), bc[v as usize]))
                .collect();
            let path = out.unwrap_or_else(|| cfg.out_dir.join("bc.csv"));
            write_csv(&path, &cfg, "node,degree,bc", &rows)?;
            println!("wrote {}", path.display());
        }
        Command::Routes { cmd } => match cmd {
            RoutesCommand::Export { common, beta, out } => {
                let cfg = common.load()?;
                let net = cfg.build_network(cfg.seeds[0])?;
                let table = build_table(&net, NodeWeight::Betweenness, beta);
                let n = net.node_count() as u32;
                let mut rows = Vec::with_capacity((n as usize) * (n as usize - 1));
                for from in 0..n {
                    for to in 0..n {
                        if from != to {
                            rows.push(format!("{},{},{}", from, to, table.next_hop(from, to)));
                        }
                    }
                }
                write_csv(&out, &cfg, "from,to,next", &rows)?;
                println!("wrote {}", out.display());
            }
        },
        Command::Train { common } => {
            let cfg = common.load()?;
            let log = run_train(&cfg)?;
            println!(
                "trained {} episodes; final mean reward {:.4}; wrote {}",
                log.n_episodes(),
                log.mean_rewards().last().copied().unwrap_or(0.0),
                cfg.out_dir.display()
            );
        }
        Command::Sweep { common } => {
            let cfg = common.load()?;
            let result = run_capacity_sweep(&cfg)?;
            result.write(&cfg)?;
            println!(
                "swept {} cells, {} R_c rows; wrote {}",
                result.rows.len(),
                result.rc.len(),
                cfg.out_dir.display()
            );
        }
        Command::Census { common } => {
            let cfg = common.load()?;
            let rows = run_action_census(&cfg)?;
            write_census(&cfg, &rows)?;
            println!("wrote {}", cfg.out_dir.join("actions.csv").display());
        }
        Command::Resilience { common } => {
            let cfg = common.load()?;
            let result = run_resilience(&cfg)?;
            write_resilience(&cfg, &result)?;
            println!("wrote {}", cfg.out_dir.display());
        }
        Command::Report { common } => {
            let cfg = common.load()?;
            let reports = run_distribution_report(&cfg)?;
            write_report(&cfg, &reports)?;
            for rep in &reports {
                println!(
                    "{}: mean T = {:.2} over {} deliveries",
                    rep.label,
                    rep.mean_travel_time(),
                    rep.travel_hist.values().sum::<u64>()
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
