use std::path::Path;

use serde::Deserialize;

use crate::CliError;

pub const ENV_MAX_N: &str = "PERMLOGIC_MAX_N";
pub const ENV_CONFIG: &str = "PERMLOGIC_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub max_n: usize,
    pub max_ef_k: usize,
    pub matrix_cap: usize,
    /// 0 lets rayon pick.
    pub threads: usize,
    pub output: Output,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_n: 8,
            max_ef_k: 6,
            matrix_cap: permlogic::marginals::DEFAULT_MATRIX_CAP,
            threads: 0,
            output: Output::Text,
        }
    }
}

/// Keys accepted in the config file; all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    max_n: Option<usize>,
    max_ef_k: Option<usize>,
    matrix_cap: Option<usize>,
    threads: Option<usize>,
    output: Option<Output>,
}

#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub max_n: Option<usize>,
    pub max_ef_k: Option<usize>,
    pub matrix_cap: Option<usize>,
    pub threads: Option<usize>,
    pub output: Option<Output>,
}

impl Config {
    /// Defaults, then the config file, then `PERMLOGIC_MAX_N`, then flags.
    pub fn resolve(
        file: Option<&Path>,
        env: impl Fn(&str) -> Option<String>,
        flags: &Overrides,
    ) -> Result<Config, CliError> {
        let mut c = Config::default();
        let path = file.map(Path::to_path_buf).or_else(|| env(ENV_CONFIG).map(Into::into));
        if let Some(path) = path {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            let f: FileConfig = toml::from_str(&text)
                .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?;
            c.apply(&Overrides {
                max_n: f.max_n,
                max_ef_k: f.max_ef_k,
                matrix_cap: f.matrix_cap,
                threads: f.threads,
                output: f.output,
            });
        }
        if let Some(v) = env(ENV_MAX_N) {
            let n = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{ENV_MAX_N}={v} is not a size")))?;
            c.max_n = n;
        }
        c.apply(flags);
        if c.max_n == 0 || c.max_ef_k == 0 || c.matrix_cap == 0 {
            return Err(CliError::Usage("caps must be positive".into()));
        }
        Ok(c)
    }

    fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.max_n {
            self.max_n = v;
        }
        if let Some(v) = o.max_ef_k {
            self.max_ef_k = v;
        }
        if let Some(v) = o.matrix_cap {
            self.matrix_cap = v;
        }
        if let Some(v) = o.threads {
            self.threads = v;
        }
        if let Some(v) = o.output {
            self.output = v;
        }
    }
}
