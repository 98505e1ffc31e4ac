use parlis::dataset::{write_dataset, Dataset};
use parlis_bench::main_with;

struct Outcome {
    code: i32,
    rows: Vec<Vec<String>>,
    diag: String,
}

fn bench(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut diag = Vec::new();
    let argv = std::iter::once("parlis-bench").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut diag);
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    let rows = match lines.next() {
        Some(h) => {
            assert_eq!(h, "algo,n,k,pattern,seed,threads,rep,millis,rounds,visits,verify");
            lines.map(|l| l.split(',').map(String::from).collect()).collect()
        }
        None => Vec::new(),
    };
    Outcome { code, rows, diag: String::from_utf8(diag).unwrap() }
}

fn col<'a>(row: &'a [String], name: &str) -> &'a str {
    let i = parlis_bench::HEADER.iter().position(|h| *h == name).unwrap();
    &row[i]
}

#[test]
fn repeated_lis_rows_agree() {
    let o = bench(&[
        "--algo",
        "lis",
        "--pattern",
        "line",
        "--n",
        "100000",
        "--t",
        "1",
        "--sigma",
        "100000",
        "--seed",
        "1",
        "--threads",
        "4",
        "--reps",
        "3",
    ]);
    assert_eq!(o.code, 0, "{}", o.diag);
    assert_eq!(o.rows.len(), 3);
    for (rep, r) in o.rows.iter().enumerate() {
        assert_eq!(col(r, "algo"), "lis");
        assert_eq!(col(r, "n"), "100000");
        assert_eq!(col(r, "pattern"), "line");
        assert_eq!(col(r, "threads"), "4");
        assert_eq!(col(r, "rep"), rep.to_string());
        assert_eq!(col(r, "k"), col(&o.rows[0], "k"));
        assert_eq!(col(r, "rounds"), col(r, "k"));
        assert_eq!(col(r, "verify"), "");
    }
}

#[test]
fn weighted_backends_verify() {
    let o = bench(&["--algo", "wlis-rt", "--algo", "wlis-rveb", "--verify", "--n", "512", "--seed", "7"]);
    assert_eq!(o.code, 0, "{}", o.diag);
    assert_eq!(o.rows.len(), 2);
    assert_eq!(col(&o.rows[0], "k"), col(&o.rows[1], "k"));
    assert!(o.rows.iter().all(|r| col(r, "verify") == "ok"));
    assert!(o.diag.contains("verify=ok"));
}

#[test]
fn every_algorithm_verifies() {
    let o = bench(&[
        "--algo",
        "lis",
        "--algo",
        "wlis-rt",
        "--algo",
        "wlis-rveb",
        "--algo",
        "seq-bs",
        "--algo",
        "seq-avl",
        "--algo",
        "brute",
        "--verify",
        "--pattern",
        "line",
        "--n",
        "3000",
        "--sigma",
        "400",
        "--weights",
        "-5:9",
    ]);
    assert_eq!(o.code, 0, "{}", o.diag);
    let names: Vec<&str> = o.rows.iter().map(|r| col(r, "algo")).collect();
    assert_eq!(names, ["lis", "wlis-rt", "wlis-rveb", "seq-bs", "seq-avl", "brute"]);
    assert!(o.rows.iter().all(|r| col(r, "verify") == "ok"));
    assert_eq!(col(&o.rows[0], "k"), col(&o.rows[3], "k"));
    assert_eq!(col(&o.rows[0], "k"), col(&o.rows[5], "k"));
    assert_eq!(col(&o.rows[1], "k"), col(&o.rows[4], "k"));
    assert_eq!(col(&o.rows[3], "rounds"), "");
}

#[test]
fn file_round_trip_matches_generator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.txt");
    let p = path.to_str().unwrap();
    let gen = bench(&["--algo", "lis", "--n", "5000", "--kprime", "300", "--seed", "3", "--output", p]);
    assert_eq!(gen.code, 0, "{}", gen.diag);
    let file = bench(&["--algo", "seq-bs", "--input", p]);
    assert_eq!(file.code, 0, "{}", file.diag);
    assert_eq!(col(&file.rows[0], "pattern"), "file");
    assert_eq!(col(&file.rows[0], "k"), col(&gen.rows[0], "k"));
}

#[test]
fn csv_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = bench(&["--algo", "seq-bs", "--n", "100", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.diag);
    assert!(o.rows.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn round_counts_on_monotone_files() {
    let dir = tempfile::tempdir().unwrap();
    for (name, values, rounds) in
        [("dec.txt", (0..200).rev().collect::<Vec<i64>>(), "1"), ("inc.txt", (0..200).collect::<Vec<i64>>(), "200")]
    {
        let path = dir.path().join(name);
        write_dataset(&Dataset::from_values(values, None).unwrap(), &path).unwrap();
        let o = bench(&["--algo", "lis", "--counters", "--input", path.to_str().unwrap()]);
        assert_eq!(o.code, 0, "{}", o.diag);
        assert_eq!(col(&o.rows[0], "rounds"), rounds);
        assert!(o.diag.contains(&format!("rounds={rounds}")));
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: &str| {
        let o = bench(&[
            "--algo",
            "lis",
            "--algo",
            "wlis-rt",
            "--algo",
            "wlis-rveb",
            "--pattern",
            "line",
            "--n",
            "20000",
            "--sigma",
            "2000",
            "--seed",
            "5",
            "--threads",
            threads,
        ]);
        assert_eq!(o.code, 0, "{}", o.diag);
        o.rows
            .into_iter()
            .map(|r| ["algo", "k", "rounds", "visits"].map(|c| col(&r, c).to_string()))
            .collect::<Vec<_>>()
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn bad_invocations_fail() {
    assert_eq!(bench(&["--algo", "lis", "--bogus"]).code, 2);
    assert_eq!(bench(&["--n", "10"]).code, 2);
    assert_eq!(bench(&["--algo", "lis", "--weights", "5:1"]).code, 2);
    let o = bench(&["--algo", "lis", "--n", "10", "--weights", "1:5"]);
    assert_eq!(o.code, 1);
    assert!(o.diag.contains("weighted algorithm"));
    let o = bench(&["--algo", "brute", "--n", "5000"]);
    assert_eq!(o.code, 1);
    assert!(o.diag.contains("capped"));
    assert_eq!(bench(&["--algo", "lis", "--input", "/nonexistent/d.txt"]).code, 1);
    assert_eq!(bench(&["--algo", "lis", "--input", "x", "--n", "5"]).code, 2);
    assert_eq!(bench(&["--algo", "lis", "--reps", "0"]).code, 1);
    assert_eq!(bench(&["--algo", "lis", "--n", "0"]).code, 1);
}
