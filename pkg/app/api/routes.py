"""
API routes for the Rational Approximation Workbench
"""

import json
from datetime import datetime

from flask import Blueprint, Response, current_app, jsonify, request

from app.core.exceptions import UsageError, WorkbenchError
from app.models.jobs import JobSpec
from app.services import catalog, elemfun
from app.services.job_service import run_job
from app.services.logging_service import logging_service
from app.utils.report_format import document

api_bp = Blueprint('api', __name__)


def _job_settings():
    """Settings overrides carried by the Flask config"""
    overrides = {}
    for key, setting in (('CHECKPOINTS', 'checkpoints'), ('QUADRATURE_NODES', 'quadrature_nodes')):
        value = current_app.config.get(key)
        if value not in (None, ''):
            overrides[setting] = int(value)
    return overrides


def _failure(e: Exception):
    payload = {'success': False, 'error': str(e)}
    if isinstance(e, WorkbenchError):
        payload['details'] = e.to_dict()
    return jsonify(payload)


def _run(command: str):
    try:
        payload = dict(request.get_json(silent=True) or {})
        payload['command'] = command
        spec = JobSpec.from_dict(payload)
        result = run_job(spec, _job_settings())
        logging_service.info(f"{command} job finished", 'api')
        return jsonify({'success': True, 'report': json.loads(document(**result.document))})
    except (WorkbenchError, ValueError) as e:
        logging_service.warning(f"{command} job failed: {e}", 'api')
        return _failure(e)
    except Exception as e:
        logging_service.error(f"Unexpected error in {command} job: {e}", 'api')
        return _failure(e)


@api_bp.route('/approx', methods=['POST'])
def approx():
    """Build an approximant from a JSON job"""
    return _run('approx')


@api_bp.route('/autocorrect', methods=['POST'])
def autocorrect():
    """Run an autocorrection experiment"""
    return _run('autocorrect')


@api_bp.route('/model', methods=['POST'])
def model():
    """Rational model of sampled data"""
    return _run('model')


@api_bp.route('/accelerate', methods=['POST'])
def accelerate():
    return _run('accelerate')


@api_bp.route('/functions')
def functions():
    """List the built-in catalog"""
    try:
        return jsonify({'success': True, 'functions': catalog.list_functions()})
    except Exception as e:
        return _failure(e)


@api_bp.route('/elemfun/<function>')
def elemfun_value(function):
    """Evaluate one elementary function"""
    try:
        x = request.args.get('x', None, type=float)
        if x is None:
            raise UsageError("Query parameter 'x' is required")
        precision = request.args.get('precision', 'ordinary')
        form = request.args.get('form', 'kernel')
        exponent = request.args.get('exponent', None, type=float)
        value = elemfun.evaluate(function, x, precision, form, exponent)
        return jsonify({'success': True, 'function': function, 'x': x, 'precision': precision, 'value': value})
    except (WorkbenchError, ValueError) as e:
        return _failure(e)


@api_bp.route('/elemfun/<function>/harness')
def elemfun_harness(function):
    """Accuracy of an elementary function against the high-precision reference"""
    try:
        precision = request.args.get('precision', 'ordinary')
        grid = request.args.get('grid', 10000, type=int)
        form = request.args.get('form', 'kernel')
        record = elemfun.accuracy_harness(function, precision, grid, form)
        return jsonify({'success': True, 'harness': record.to_dict()})
    except (WorkbenchError, ValueError) as e:
        return _failure(e)


@api_bp.route('/logs')
def get_logs():
    """Get application logs with optional filtering"""
    try:
        limit = request.args.get('limit', 100, type=int)
        level = request.args.get('level', None)
        source = request.args.get('source', None)
        start_date = request.args.get('start_date', None)
        end_date = request.args.get('end_date', None)

        logs = logging_service.get_logs(
            limit=limit,
            level=level,
            source=source,
            start_date=start_date,
            end_date=end_date
        )

        return jsonify({
            'success': True,
            'logs': logs
        })
    except Exception as e:
        return jsonify({'success': False, 'error': str(e)})


@api_bp.route('/logs/stats')
def get_log_stats():
    """Get log statistics"""
    try:
        stats = logging_service.get_log_stats()
        return jsonify({'success': True, 'stats': stats})
    except Exception as e:
        return jsonify({'success': False, 'error': str(e)})


@api_bp.route('/logs/clear', methods=['POST'])
def clear_logs():
    """Clear all application logs"""
    try:
        logging_service.clear_logs()
        return jsonify({'success': True, 'message': 'Logs cleared successfully'})
    except Exception as e:
        return jsonify({'success': False, 'error': str(e)})


@api_bp.route('/logs/export')
def export_logs():
    """Export logs in specified format"""
    try:
        format_type = request.args.get('format', 'json')
        logs = logging_service.get_logs(
            limit=request.args.get('limit', None, type=int),
            level=request.args.get('level', None),
            source=request.args.get('source', None)
        )
        content = logging_service.export_logs(format_type, logs)
        mimetype = 'application/json' if format_type == 'json' else 'text/plain'
        return Response(
            content,
            mimetype=mimetype,
            headers={'Content-Disposition': f'attachment; filename=logs_{datetime.now().strftime("%Y%m%d")}.{format_type}'}
        )
    except Exception as e:
        return jsonify({'success': False, 'error': str(e)})
