"""
Model files and the command line
================================

Every toy above fits in one JSON model file.  The ``gwsurgery`` command
reads it and writes deterministic JSON: the same input always produces
the same bytes.
"""
import json
import tempfile
from pathlib import Path

from gwsurgery import modelfile
from gwsurgery.cli import main
from gwsurgery.toy import toy_model_file

text = modelfile.canonical_dumps(modelfile.dump(toy_model_file()))
path = Path(tempfile.mkdtemp()) / "toy.json"
path.write_text(text)
print(sorted(json.loads(text)))

assert modelfile.canonical_dumps(modelfile.dump(modelfile.loads(text))) == text

###############################################################################
# The same as running ``gwsurgery glue --model toy.json`` in a shell.
out = path.with_name("glue.json")
code = main(["glue", "--model", str(path), "--out", str(out)])
print(code, json.loads(out.read_text())["value"])

code = main(["verify-flop", "--model", str(path), "--out", str(out)])
print(code, json.loads(out.read_text())["verdict"])

main(["expand", "--series", "G([0,1]) + 3*q^[1,0]", "--order", "4", "--area", "4,1"])
