#!/usr/bin/env python3
"""Download the MovieLens-100k archive into data/ml-100k/."""
import argparse
import hashlib
import sys
import urllib.request
import zipfile
from pathlib import Path

URL = "https://files.grouplens.org/datasets/movielens/ml-100k.zip"
MD5 = "0e33842e24a9c977be4e0107933c0723"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default=None,
                        help="directory that will hold ml-100k/ (default: repo data/)")
    args = parser.parse_args()
    dest = (Path(args.dest) if args.dest
            else Path(__file__).resolve().parent.parent / "data")
    target = dest / "ml-100k" / "u.data"
    if target.exists():
        print(f"already present: {target}")
        return 0
    dest.mkdir(parents=True, exist_ok=True)
    archive = dest / "ml-100k.zip"
    print(f"fetching {URL}")
    urllib.request.urlretrieve(URL, archive)
    digest = hashlib.md5(archive.read_bytes()).hexdigest()
    if digest != MD5:
        print(f"checksum mismatch: got {digest}, expected {MD5}", file=sys.stderr)
        return 1
    with zipfile.ZipFile(archive) as zf:
        zf.extractall(dest)
    archive.unlink()
    if not target.exists():
        print("archive did not contain ml-100k/u.data", file=sys.stderr)
        return 1
    print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
