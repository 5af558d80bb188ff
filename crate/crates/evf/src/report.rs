//! Structured text reports.

use toml::{Table, Value};

use crate::weak_limit::WeakLimitTable;

/// Named sections of scalar entries plus optional tables, rendered as
/// `[section]` blocks of `key = value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvfReport {
    root: Table,
}

impl EvfReport {
    pub fn new(convention: &str) -> Self {
        let mut report = Self::default();
        report.set("conventions", "inverse_laplacian", convention);
        report
    }

    fn section(&mut self, section: &str) -> &mut Table {
        self.root
            .entry(section.to_string())
            .or_insert_with(|| Value::Table(Table::new()))
            .as_table_mut()
            .expect("report sections are tables")
    }

    pub fn set(&mut self, section: &str, key: &str, value: impl Into<Value>) {
        self.section(section).insert(key.to_string(), value.into());
    }

    pub fn set_floats(&mut self, section: &str, key: &str, values: &[f64]) {
        let list = values.iter().map(|&v| Value::Float(v)).collect();
        self.section(section).insert(key.to_string(), Value::Array(list));
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Value> {
        self.root.get(section)?.as_table()?.get(key)
    }

    pub fn add_weak_limit(&mut self, name: &str, table: &WeakLimitTable) {
        let rows = &table.rows;
        let col = |f: fn(&crate::weak_limit::GapRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
        self.set_floats(name, "index", &col(|r| r.index as f64));
        self.set_floats(name, "product_gap", &col(|r| r.product_gap));
        self.set_floats(name, "corrected_gap", &col(|r| r.corrected_gap));
        self.set_floats(name, "comm_gap", &col(|r| r.comm_gap));
        self.set(name, "product_limit", table.product_limit);
        if let Some(rate) = table.comm_rate() {
            self.set(name, "comm_rate", rate);
        }
        self.set(name, "comm_strictly_decreasing", table.comm_strictly_decreasing());
    }

    pub fn render(&self) -> String {
        toml::to_string(&self.root).expect("tables of plain values always serialise")
    }
}
