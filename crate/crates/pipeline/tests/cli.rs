//! Command-line behaviour on small fixture corpora.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixtures;
use hmh_core::imgcore::io;
use hmh_core::matting::composite;
use hmh_core::{AlphaMatte, RgbImage};
use hmh_pipeline::manifest::{read_jsonl, CorpusRecord, Split, TripletRecord, CORPUS_MANIFEST, TRIPLET_MANIFEST};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn hmh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmh")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = hmh(args);
    assert!(
        out.status.success(),
        "hmh {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn prepared(n: usize, size: &str) -> (TempDir, std::path::PathBuf) {
    let tmp = TempDir::new().unwrap();
    let corpus = tmp.path().join("corpus");
    fixtures::write_corpus(&corpus, n, 5, 48, 40);
    let ds = tmp.path().join("ds");
    ok(&["--size", size, "prepare", s(&corpus), s(&ds)]);
    (tmp, ds)
}

#[test]
fn prepare_on_empty_corpus_writes_empty_manifest() {
    let tmp = TempDir::new().unwrap();
    std::fs::create_dir_all(tmp.path().join("c/images")).unwrap();
    std::fs::create_dir_all(tmp.path().join("c/alphas")).unwrap();
    let ds = tmp.path().join("ds");
    ok(&["prepare", s(&tmp.path().join("c")), s(&ds)]);
    assert_eq!(std::fs::read_to_string(ds.join(CORPUS_MANIFEST)).unwrap(), "");
}

#[test]
fn prepare_writes_four_square_files_per_record() {
    let (_tmp, ds) = prepared(2, "32");
    let records: Vec<CorpusRecord> = read_jsonl(&ds.join(CORPUS_MANIFEST)).unwrap();
    assert_eq!(records.len(), 2);
    for r in &records {
        assert_eq!((r.width, r.height), (32, 32));
        for rel in [&r.image, &r.foreground, &r.background] {
            assert_eq!(io::load_rgb(ds.join(rel)).unwrap().dims(), (32, 32));
        }
        assert_eq!(io::load_alpha(ds.join(&r.alpha)).unwrap().dims(), (32, 32));
    }
}

#[test]
fn orphans_warn_and_failures_set_exit_code() {
    let tmp = TempDir::new().unwrap();
    let corpus = tmp.path().join("corpus");
    fixtures::write_corpus(&corpus, 2, 9, 24, 24);
    // orphan image without a matte: skipped with a warning, not a failure
    std::fs::copy(corpus.join("images/p0000.png"), corpus.join("images/lonely.png")).unwrap();
    let out = ok(&["--size", "24", "prepare", s(&corpus), s(&tmp.path().join("a"))]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 warnings"));

    // a fully opaque matte leaves nothing to inpaint from: that record fails
    io::save_alpha(&AlphaMatte::filled(24, 24, 1.0).unwrap(), corpus.join("alphas/p0001.png")).unwrap();
    let ds = tmp.path().join("b");
    let out = hmh(&["--size", "24", "prepare", s(&corpus), s(&ds)]);
    assert_eq!(out.status.code(), Some(1));
    let records: Vec<CorpusRecord> = read_jsonl(&ds.join(CORPUS_MANIFEST)).unwrap();
    assert_eq!(records.len(), 1);
}

#[test]
fn identity_override_reproduces_plain_composite() {
    let (_tmp, ds) = prepared(3, "32");
    ok(&["triplets", s(&ds), "--adjust-override", "illumination:1"]);
    let records: Vec<TripletRecord> = read_jsonl(&ds.join(TRIPLET_MANIFEST)).unwrap();
    assert_eq!(records.len(), 3);
    for r in &records {
        let i = io::load_rgb(ds.join(&r.image)).unwrap();
        let a = io::load_alpha(ds.join(&r.alpha)).unwrap();
        let b = io::load_rgb(ds.join(&r.background)).unwrap();
        let want = io::encode_png_rgb(&composite(&i, &a, &b).unwrap()).unwrap();
        assert_eq!(std::fs::read(ds.join(&r.disharmonious)).unwrap(), want, "{}", r.image_id);
    }
}

#[test]
fn opaque_matte_triplet_equals_image() {
    // written by hand: prepare itself rejects an all-foreground matte
    let tmp = TempDir::new().unwrap();
    let ds = tmp.path();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (img, _) = fixtures::portrait(&mut rng, 16, 16);
    for sub in ["image", "alpha", "foreground", "background"] {
        std::fs::create_dir_all(ds.join(sub)).unwrap();
    }
    io::save_rgb(&img, ds.join("image/x.png")).unwrap();
    io::save_rgb(&img, ds.join("foreground/x.png")).unwrap();
    io::save_rgb(&RgbImage::filled(16, 16, [0.2, 0.7, 0.1]).unwrap(), ds.join("background/x.png")).unwrap();
    io::save_alpha(&AlphaMatte::filled(16, 16, 1.0).unwrap(), ds.join("alpha/x.png")).unwrap();
    let record = serde_json::json!({
        "image_id": "x", "image": "image/x.png", "alpha": "alpha/x.png",
        "foreground": "foreground/x.png", "background": "background/x.png",
        "width": 16, "height": 16,
    });
    std::fs::write(ds.join(CORPUS_MANIFEST), format!("{record}\n")).unwrap();

    for adjust in ["illumination:0.5", "color_enhance:2"] {
        ok(&["triplets", s(ds), "--adjust-override", adjust]);
        assert_eq!(
            std::fs::read(ds.join("disharmonious/x.png")).unwrap(),
            std::fs::read(ds.join("image/x.png")).unwrap(),
            "{adjust}"
        );
    }
}

#[test]
fn split_counts_and_files() {
    let (_tmp, ds) = prepared(10, "32");
    ok(&["--seed", "4", "triplets", s(&ds)]);
    ok(&["--seed", "4", "split", s(&ds)]);
    let records: Vec<TripletRecord> = read_jsonl(&ds.join(TRIPLET_MANIFEST)).unwrap();
    let train = records.iter().filter(|r| r.split == Split::Train).count();
    assert_eq!((train, records.len() - train), (9, 1));
    let listed = std::fs::read_to_string(ds.join("splits/train.txt")).unwrap();
    assert_eq!(listed.lines().count(), 9);
    // transfer targets never come from the test split
    let test_ids: Vec<_> = records.iter().filter(|r| r.split == Split::Test).map(|r| &r.image_id).collect();
    for r in &records {
        if let Some(t) = r.adjustment.target_id() {
            assert!(!test_ids.iter().any(|id| id.as_str() == t));
            assert_ne!(t, r.image_id);
        }
    }
    ok(&["verify", s(&ds)]);
}

#[test]
fn verify_detects_tampering() {
    let (_tmp, ds) = prepared(2, "32");
    ok(&["triplets", s(&ds)]);
    let records: Vec<TripletRecord> = read_jsonl(&ds.join(TRIPLET_MANIFEST)).unwrap();
    let path = ds.join(&records[0].disharmonious);
    let mut img = io::load_rgb(&path).unwrap().into_raw();
    img[0] = if img[0] > 0.5 { 0.0 } else { 1.0 };
    io::save_rgb(&RgbImage::new(32, 32, img).unwrap(), &path).unwrap();
    assert_eq!(hmh(&["verify", s(&ds)]).status.code(), Some(1));
}

#[test]
fn composite_with_opaque_matte_returns_image() {
    let tmp = TempDir::new().unwrap();
    let bgs = tmp.path().join("bg");
    std::fs::create_dir_all(&bgs).unwrap();
    io::save_rgb(&RgbImage::filled(30, 20, [0.1, 0.2, 0.3]).unwrap(), bgs.join("only.png")).unwrap();
    std::fs::write(bgs.join("broken.png"), b"not a png").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (img, alpha) = fixtures::portrait(&mut rng, 12, 10);
    io::save_rgb(&img, tmp.path().join("i.png")).unwrap();
    io::save_alpha(&AlphaMatte::filled(12, 10, 1.0).unwrap(), tmp.path().join("a1.png")).unwrap();
    io::save_alpha(&alpha, tmp.path().join("a.png")).unwrap();
    let out = tmp.path().join("out.png");
    let run = |alpha: &str| {
        ok(&[
            "--seed", "2", "composite", "--backgrounds", s(&bgs), "--image", s(&tmp.path().join("i.png")),
            "--alpha", s(&tmp.path().join(alpha)), "--out", s(&out),
        ]);
        std::fs::read(&out).unwrap()
    };
    assert_eq!(run("a1.png"), std::fs::read(tmp.path().join("i.png")).unwrap());
    assert_eq!(run("a.png"), run("a.png"));

    std::fs::remove_file(bgs.join("only.png")).unwrap();
    std::fs::remove_file(bgs.join("broken.png")).unwrap();
    let empty = hmh(&[
        "composite", "--backgrounds", s(&bgs), "--image", s(&tmp.path().join("i.png")),
        "--alpha", s(&tmp.path().join("a.png")), "--out", s(&out),
    ]);
    assert_eq!(empty.status.code(), Some(2));
}

#[test]
fn eval_matting_against_itself_is_zero() {
    let (_tmp, ds) = prepared(3, "24");
    ok(&["triplets", s(&ds)]);
    let report = ds.join("report.jsonl");
    let alpha = ds.join("alpha");
    ok(&["eval-matting", "--pred", s(&alpha), "--gt", s(&alpha), "--trimap", s(&ds.join("trimap")), "--report", s(&report)]);
    let text = std::fs::read_to_string(&report).unwrap();
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    for k in ["mse", "sad", "grad", "conn"] {
        assert_eq!(last["mean"][k], 0.0, "{k}");
    }
    assert_eq!(last["mean"]["images"], 3);
}

#[test]
fn eval_mos_and_losses_commands() {
    let tmp = TempDir::new().unwrap();
    let scores = tmp.path().join("mos.csv");
    std::fs::write(&scores, "image_id,rater_id,method,score\na,r1,ours,4\na,r2,ours,2\nb,r1,base,3\n").unwrap();
    let out = ok(&["eval-mos", s(&scores)]);
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("ours") && table.contains("base"), "{table}");
    std::fs::write(&scores, "image_id,rater_id,method,score\na,r1,ours,6\n").unwrap();
    assert_eq!(hmh(&["eval-mos", s(&scores)]).status.code(), Some(2));

    let d = tmp.path().join("d.csv");
    std::fs::write(&d, "d_real,d_harmonized,d_composite,d_disharmonious\n1,0.2,0.3,0.1\n0.5,0.5,0.5,0.5\n").unwrap();
    let out = ok(&["losses", "--scores", s(&d)]);
    let bundle: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((bundle["disc"].as_f64().unwrap() - 0.3).abs() < 1e-12);
    assert!((bundle["gen_matting_adv"].as_f64().unwrap() - 0.35).abs() < 1e-12);
}
