from flask import Flask, render_template, request, jsonify, redirect, url_for
import sys
from pathlib import Path

# Ensure repository root is on sys.path for package import
ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.append(str(ROOT))

from prescheck import bundled
from prescheck import report as report_mod
from prescheck.cli import build_parser, diagnostic, run_args

app = Flask(__name__)


@app.route('/', methods=['GET'])
def index():
    return render_template('index.html')


@app.route('/run', methods=['GET', 'POST'])
def run_api():
    # Simple help on GET to avoid 405 if user navigates directly
    if request.method == 'GET':
        return jsonify({
            'ok': True,
            'usage': 'POST JSON to this endpoint with {argv: [...]} as on the command line',
            'example': {'argv': ['ring', 'h1', '--ring', 'Z/6', '--module', 'self', '--cover', '3,4']},
        })
    data = request.get_json(force=True, silent=True) or {}
    argv = data.get('argv')
    if not isinstance(argv, list) or not all(isinstance(a, str) for a in argv):
        return jsonify({'ok': False, 'error': 'argv must be a list of strings'}), 400
    try:
        args = build_parser().parse_args(argv)
    except SystemExit:
        return jsonify({'ok': False, 'exit_code': 2, 'error': f'invalid arguments: {" ".join(argv)}'}), 400
    try:
        rep, code, diag = run_args(args)
    except Exception as e:
        return jsonify({'ok': False, 'error': str(e)}), 500
    if diag is not None:
        return jsonify({'ok': False, 'exit_code': code, 'error': diag}), 400
    result = rep.as_dict(timings=bool(args.timings))
    # Pre-generate a compact HTML report for the UI
    try:
        report_html = report_mod.report(result)
    except Exception as _:
        report_html = "<p>Report generation unavailable.</p>"
    return jsonify({'ok': True, 'exit_code': code, 'report': result, 'report_html': report_html})


@app.route('/lattices', methods=['GET'])
def lattices_api():
    try:
        rows = bundled.list_lattices(request.args.get('q'))
    except ValueError as e:
        return jsonify({'ok': False, 'error': diagnostic(e)}), 500
    return jsonify({'ok': True, 'lattices': rows})


@app.route('/rings', methods=['GET'])
def rings_api():
    try:
        rows = bundled.list_rings(request.args.get('q'))
    except ValueError as e:
        return jsonify({'ok': False, 'error': diagnostic(e)}), 500
    return jsonify({'ok': True, 'rings': rows})


@app.errorhandler(405)
def handle_405(e):
    # If someone POSTs to '/', redirect to the main page
    if request.path == '/':
        return redirect(url_for('index'), code=303)
    return jsonify({'ok': False, 'error': 'Method Not Allowed', 'hint': 'GET / for UI, POST JSON to /run'}), 405

if __name__ == '__main__':
    app.run(debug=True)
