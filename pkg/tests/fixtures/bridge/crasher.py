"""Model that dies on any request whose text contains CRASH, and garbles GARBLE."""
import json
import sys

for line in sys.stdin:
    req = json.loads(line)
    if "CRASH" in req["text"]:
        sys.exit(3)
    if "GARBLE" in req["text"]:
        sys.stdout.write("this is not json\n")
    elif "REFUSE" in req["text"]:
        sys.stdout.write(json.dumps({"id": req["id"], "error": "refused"}) + "\n")
    else:
        sys.stdout.write(json.dumps({"id": req["id"], "text": req["text"].upper()}) + "\n")
    sys.stdout.flush()
