use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn meshfab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meshfab"))
        .args(args)
        .env_remove("MESHFAB_MAX_CYCLES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const WALKTHROUGH_ASM: &str = "\
PROG dest=0 val=1.1 next=A_ADD ndest=3
PROG dest=1 val=1.2 next=A_ADD ndest=3
PROG dest=2 val=1.3 next=UPDATE ndest=3
A_MULS dest=0 val=1.0 next=PROG ndest=0
A_MULS dest=1 val=2.0 next=PROG ndest=0
A_MULS dest=2 val=3.0 next=PROG ndest=0
";

#[test]
fn asm_disasm_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "w.asm", WALKTHROUGH_ASM);
    let hex = meshfab(&["asm", &src]);
    assert!(hex.status.success());
    assert_eq!(stdout(&hex).lines().count(), 6);
    let hex_path = write(dir.path(), "w.hex", &stdout(&hex));
    let back = meshfab(&["disasm", &hex_path]);
    assert!(back.status.success());
    assert_eq!(stdout(&back), WALKTHROUGH_ASM);
}

#[test]
fn empty_assembly_is_empty_output() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "e.asm", "");
    let o = meshfab(&["asm", &src]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_mnemonic_is_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "b.asm", "# ok\nA_POW dest=1 val=1 next=PROG ndest=0\n");
    let o = meshfab(&["asm", &src]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn invalid_hex_code_is_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "b.hex", "000000000000000f\n");
    assert_eq!(meshfab(&["disasm", &src]).status.code(), Some(2));
}

#[test]
fn walkthrough_run_reports_site_3() {
    let dir = tempfile::tempdir().unwrap();
    let sched = meshfab(&["schedule", "walkthrough"]);
    let path = write(dir.path(), "f.sched", &stdout(&sched));
    let o = meshfab(&["run", &path]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("site 3: 7.4\n"), "{text}");
    assert!(text.contains("timesteps: 5\n"));
    assert!(text.contains("7.9"));
}

#[test]
fn run_writes_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "f.sched", &stdout(&meshfab(&["schedule", "walkthrough"])));
    let fabric = write(dir.path(), "strip.fabric", "rows=1\ncols=4\n");
    let out = dir.path().join("out");
    let o = meshfab(&["run", &path, "--fabric", &fabric, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let state = fs::read_to_string(out.join("state.csv")).unwrap();
    assert_eq!(state, "site,value\n0,1.1\n1,1.2\n2,1.3\n3,7.4\n");
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("cycle,site,event,word,value\n"));
}

#[test]
fn empty_schedule_takes_zero_steps() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "e.sched", "");
    let o = meshfab(&["run", &path]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "timesteps: 0\n");
}

#[test]
fn matvec_4x3_takes_seven_steps() {
    let dir = tempfile::tempdir().unwrap();
    let sched = meshfab(&["schedule", "matvec", "--rows", "4", "--cols", "3"]);
    let path = write(dir.path(), "m.sched", &stdout(&sched));
    let text = stdout(&meshfab(&["run", &path]));
    assert!(text.contains("timesteps: 7\n"), "{text}");
    assert_eq!(text.matches("output ").count(), 4);
}

#[test]
fn watchdog_override_gives_simulation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "f.sched", &stdout(&meshfab(&["schedule", "walkthrough"])));
    let o = Command::new(env!("CARGO_BIN_EXE_meshfab"))
        .args(["run", &path])
        .env("MESHFAB_MAX_CYCLES", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("watchdog"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(meshfab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(meshfab(&["run"]).status.code(), Some(1));
    assert_eq!(meshfab(&["run", "/nonexistent/file"]).status.code(), Some(1));
}

#[test]
fn malformed_schedule_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "x.sched", "@0 sideways=1 PROG dest=0 val=1 next=PROG ndest=0\n");
    assert_eq!(meshfab(&["run", &path]).status.code(), Some(2));
}

#[test]
fn two_node_pagerank_is_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write(dir.path(), "g.tsv", "P1\tP2\n");
    let o = meshfab(&["pagerank", &edges, "--iters", "10"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "rank,node,label,score\n1,0,P1,0.5\n2,1,P2,0.5\nN,n,d,timesteps,model_seconds\n2,10,0.85,80,0.0000004\n"
    );
}

#[test]
fn synthetic_pagerank_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pr");
    let o = meshfab(&["pagerank", "--nodes", "64", "--iters", "20", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let ranks = fs::read_to_string(out.join("ranks.csv")).unwrap();
    assert_eq!(ranks.lines().count(), 65);
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with("N,n,d,timesteps,model_seconds\n64,20,0.85,"));
}

#[test]
fn model_only_headline() {
    let o = meshfab(&["pagerank", "--model-only", "--nodes", "5000"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("213.6"), "{}", stdout(&o));
    let c = meshfab(&["pagerank", "--model-only", "--nodes", "5000", "--model", "ceil"]);
    assert!(stdout(&c).contains("218.435 ms"));
}

#[test]
fn matvec_sweep_is_n_plus_3() {
    let o = meshfab(&["sweep", "matvec-latency"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,n,S,f_hz,timesteps,seconds,model"));
    let mut count = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let n: u64 = cols[0].parse().unwrap();
        assert_eq!(cols[4].parse::<u64>().unwrap(), n + 3);
        count += 1;
    }
    assert_eq!(count, 6);
}

#[test]
fn throughput_sweep_has_headline_endpoint() {
    let text = stdout(&meshfab(&["sweep", "pagerank-throughput", "--model", "fractional"]));
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("5000,100,4096,"));
    let secs: f64 = last.split(',').nth(5).unwrap().parse().unwrap();
    assert!((secs - 0.2136).abs() < 1e-3);
}

#[test]
fn empty_sweep_range_is_header_only() {
    let o = meshfab(&["sweep", "matvec-latency", "--from", "10", "--to", "5"]);
    assert_eq!(stdout(&o), "N,n,S,f_hz,timesteps,seconds,model\n");
}

#[test]
fn identical_invocations_identical_bytes() {
    let args = ["pagerank", "--nodes", "32", "--iters", "5", "--seed", "9"];
    assert_eq!(meshfab(&args).stdout, meshfab(&args).stdout);
    let g = ["generate", "--nodes", "50"];
    assert_eq!(meshfab(&g).stdout, meshfab(&g).stdout);
}
