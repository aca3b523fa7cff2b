use crate::CliError;
use galerkin_rks::model::io::fmt_f64;
use std::path::Path;

/// CSV text with `#` metadata lines, assembled in memory and written once.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(command: &str, config: &str, columns: &[&str]) -> Self {
        let mut text = format!("# galerkin-rks {command}\n# {config}\n");
        text.push_str(&columns.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_file(path, &self.text)
    }
}

pub fn num(x: f64) -> String {
    fmt_f64(x)
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}
