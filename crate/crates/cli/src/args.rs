use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact p-bases, lambda functions, Λ-closures, loci and t-adic lifting
/// over rational function fields GF(q)(t1, ..., tn).
///
/// Tuples are comma-separated expressions; the empty string is the empty
/// tuple. Expressions use `+ - * / ^`, parentheses, integers and `alpha`
/// (the generator of GF(p^m)).
#[derive(Parser, Debug)]
#[command(name = "plambda", version)]
pub struct Cli {
    #[command(flatten)]
    pub session: SessionArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SessionArgs {
    /// Coefficient field, `GF(p)` or `GF(p^m)`.
    #[arg(long, global = true, default_value = "GF(2)")]
    pub field: String,
    /// Ambient variables, comma-separated.
    #[arg(long, global = true, default_value = "t")]
    pub vars: String,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include stage-by-stage traces where available.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of S-pairs per Gröbner basis computation.
    #[arg(long, global = true)]
    pub spair_cap: Option<u64>,
    /// Wall-clock budget per command, in milliseconds.
    #[arg(long, global = true)]
    pub time_limit_ms: Option<u64>,
    /// Drop zeros and redundant elements from closure stages.
    #[arg(long, global = true)]
    pub prune: bool,
    /// Report wall-clock time (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Run every engine single-threaded.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Lambda coordinates of `a` over a p-independent tuple `b`.
    Lambda {
        #[arg(long)]
        a: String,
        #[arg(long, default_value = "")]
        b: String,
    },
    /// Left-greedy p-independent prefix of `b` over a base field.
    Pind {
        #[arg(long)]
        b: String,
        /// Generators of the base (empty: the prime-power field).
        #[arg(long, default_value = "")]
        base: String,
    },
    /// Λ-closure of GF(q)(gens), or of C(gens) for a base C.
    Closure {
        #[arg(long)]
        gens: String,
        #[command(flatten)]
        base: BaseArgs,
    },
    /// The truncation λ_{F/b/c} a with its coordinate projection.
    Fbc {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        base: BaseArgs,
        /// Also report the stage for every ordering of `a` (at most 4 entries).
        #[arg(long)]
        all_orderings: bool,
    },
    /// Is `ext` separable over `sub`?
    Separable(PairArgs),
    /// Is `ext` separated over `sub`?
    Separated(PairArgs),
    /// Imperfection degree of GF(q)(gens) (empty: the whole ambient field).
    Impdeg {
        #[arg(long)]
        gens: String,
        /// Report the degree relative to this subfield instead.
        #[arg(long)]
        base: Option<String>,
    },
    /// Membership of `x` in GF(q)(gens), with a witness.
    Member {
        #[arg(long)]
        x: String,
        #[arg(long)]
        gens: String,
        /// Also report the minimal polynomial of `x`.
        #[arg(long)]
        minpoly: bool,
    },
    /// Ideal of polynomial relations of the tuple `a` over a base.
    Locus {
        #[arg(long)]
        a: String,
        #[arg(long, default_value = "")]
        base: String,
    },
    /// Newton lifting of a polynomial system over truncated series.
    Hensel {
        /// Equations separated by `;`.
        #[arg(long)]
        system: String,
        /// Values of the parameter block, as ambient elements.
        #[arg(long, default_value = "")]
        x: String,
        /// Starting values of the unknowns.
        #[arg(long)]
        y0: String,
        #[arg(long)]
        prec: usize,
        /// Parameter names (default: variables starting with `x`).
        #[arg(long)]
        xvars: Option<String>,
        /// Unknown names (default: variables starting with `y`).
        #[arg(long)]
        yvars: Option<String>,
        /// Expansion center, one value per ambient variable.
        #[arg(long)]
        center: Option<String>,
    },
    /// Sample the t-adic local surjectivity of the projection locus(a,b) -> locus(a).
    Surjectivity {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "")]
        base: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 32)]
        prec: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[arg(long)]
        center: Option<String>,
    },
    /// Cosets inside the image of y -> y^p + t*y^(2p) modulo t^N.
    InteriorScan {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        prec: usize,
        #[arg(long)]
        ybound: usize,
    },
    /// Run one command per stdin line; outputs follow input order.
    Batch {
        /// Execute lines concurrently.
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct BaseArgs {
    /// Generators of the base field C (default: the prime-power field).
    #[arg(long)]
    pub base: Option<String>,
    /// A p-basis of C (default: extracted from its generators).
    #[arg(long)]
    pub pbasis: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Generators of the smaller field.
    #[arg(long)]
    pub sub: String,
    /// Generators of the larger field (empty: the whole ambient field).
    #[arg(long, default_value = "")]
    pub ext: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Auto,
    Direct,
    Lambda,
}
