//! Machine-readable report stream: line-delimited JSON records interleaved
//! with `#`-prefixed human text on standard output. Every verdict carries
//! the truncation bound it was certified under.

use serde::Serialize;

#[derive(Default)]
pub struct Report {
    records: Vec<String>,
    negative: bool,
    truncation_limited: bool,
}

#[derive(Serialize)]
struct Meta<'a> {
    record: &'static str,
    command: &'a str,
    session_digest: &'a str,
    bound: u32,
}

#[derive(Serialize)]
struct Verdict<'a> {
    record: &'static str,
    name: &'a str,
    subject: &'a str,
    ok: bool,
    bound: i64,
    detail: &'a str,
}

#[derive(Serialize)]
struct Table<'a> {
    record: &'static str,
    name: &'a str,
    steps: &'a [Vec<i64>],
}

#[derive(Serialize)]
struct PeriodRec<'a> {
    record: &'static str,
    subject: &'a str,
    period: Option<u32>,
    shift: Option<i64>,
    pmax: u32,
}

#[derive(Serialize)]
struct Timing {
    record: &'static str,
    ms: u128,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn human(&mut self, line: impl AsRef<str>) {
        self.records.push(format!("# {}", line.as_ref()));
    }

    pub fn meta(&mut self, command: &str, digest: &str, bound: u32) {
        let rec = Meta { record: "meta", command, session_digest: digest, bound };
        self.records.push(serde_json::to_string(&rec).unwrap());
    }

    pub fn verdict(&mut self, name: &str, subject: &str, ok: bool, bound: i64, detail: &str) {
        if !ok {
            self.negative = true;
        }
        let rec = Verdict { record: "verdict", name, subject, ok, bound, detail };
        self.records.push(serde_json::to_string(&rec).unwrap());
    }

    pub fn truncation_limited(&mut self, detail: &str) {
        self.truncation_limited = true;
        self.records.push(format!(
            "{{\"record\":\"truncation\",\"detail\":{}}}",
            serde_json::to_string(detail).unwrap()
        ));
    }

    pub fn betti(&mut self, name: &str, steps: &[Vec<i64>]) {
        let rec = Table { record: "betti", name, steps };
        self.records.push(serde_json::to_string(&rec).unwrap());
    }

    pub fn period(&mut self, subject: &str, found: Option<(u32, i64)>, pmax: u32) {
        if found.is_none() {
            self.negative = true;
        }
        let rec = PeriodRec {
            record: "period",
            subject,
            period: found.map(|x| x.0),
            shift: found.map(|x| x.1),
            pmax,
        };
        self.records.push(serde_json::to_string(&rec).unwrap());
    }

    pub fn value(&mut self, key: &str, val: impl Serialize) {
        let mut map = serde_json::Map::new();
        map.insert("record".into(), serde_json::Value::String("value".into()));
        map.insert("name".into(), serde_json::Value::String(key.into()));
        map.insert("value".into(), serde_json::to_value(val).unwrap());
        self.records.push(serde_json::to_string(&serde_json::Value::Object(map)).unwrap());
    }

    pub fn timing(&mut self, ms: u128) {
        let rec = Timing { record: "timing", ms };
        self.records.push(serde_json::to_string(&rec).unwrap());
    }

    pub fn exit_code(&self) -> i32 {
        if self.negative {
            1
        } else if self.truncation_limited {
            2
        } else {
            0
        }
    }

    pub fn print(&self) {
        for line in &self.records {
            println!("{line}");
        }
    }

}
