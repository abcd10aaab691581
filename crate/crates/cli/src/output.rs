use std::fs;
use std::io::Write;
use std::path::Path;

use cutglue::bundle::Bundle;
use cutglue::Qf;

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

pub fn join_qf(xs: &[Qf], sep: &str) -> String {
    xs.iter().map(Qf::to_string).collect::<Vec<_>>().join(sep)
}

pub fn bundle_text(bundle: &Bundle) -> String {
    let mut s = String::new();
    if let Some(c) = &bundle.configuration {
        let unwrap = |xs: &[cutglue::Witness]| xs.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
        s += &format!("n = {}\n", c.n);
        s += &format!("form = diag({})\n", join_qf(&unwrap(&c.form), ", "));
        s += &format!("w = ({})\n", join_qf(&unwrap(&c.w), ", "));
        s += &format!("<w,w> = {}, w1 = {}\n", c.w_norm.0, c.w1.0);
    }
    if let Some(d) = bundle.distance {
        s += &format!("distance = {d:.12}\n");
    }
    if let Some(vb) = &bundle.volume_bound {
        s += &format!("{vb}\n");
    }
    for cert in &bundle.certificates {
        s += &format!("{cert}\n");
    }
    s
}

pub fn bundle_csv(bundle: &Bundle) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["statement", "verdict", "method_tags", "note"])?;
    for c in &bundle.certificates {
        w.write_record([
            c.statement.to_string(),
            c.verdict.to_string(),
            c.method_tags.join(" "),
            c.note.clone(),
        ])?;
    }
    into_string(w)
}

pub fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String, csv::Error> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
