"""
Tests for the HTTP API
"""

import json
import math

import pytest

from app.services.logging_service import logging_service


class TestJobEndpoints:
    def test_approx(self, client):
        response = client.post('/api/approx', json={'fn': 'exp', 'm': 2, 'n': 2, 'method': 'pade'})
        data = response.get_json()
        assert data['success'] is True
        assert data['report']['report']['checkpoints'] == 400
        assert data['report']['report']['abs_error'] == pytest.approx(4.0e-3, rel=0.1)
        assert data['report']['approximant']['m'] == 2

    def test_unknown_field(self, client):
        data = client.post('/api/approx', json={'fn': 'exp', 'order': 3}).get_json()
        assert data['success'] is False
        assert data['details']['type'] == 'UsageError'

    def test_command_cannot_be_overridden(self, client):
        data = client.post('/api/approx', json={'command': 'model', 'fn': 'exp', 'm': 1, 'n': 1}).get_json()
        assert data['success'] is True
        assert data['report']['job']['command'] == 'approx'

    def test_empty_domain(self, client):
        data = client.post('/api/approx', json={'fn': 'exp', 'a': 1.0, 'b': 0.0}).get_json()
        assert data['success'] is False
        assert 'a < b' in data['error']

    def test_construction_failure(self, client):
        payload = {'taylor': [1.0, 0.0, 1.0, 0.0], 'method': 'pade', 'm': 1, 'n': 1}
        data = client.post('/api/approx', json=payload).get_json()
        assert data['success'] is False
        assert data['details']['type'] == 'DegeneratePadeError'

    def test_autocorrect(self, client):
        data = client.post('/api/autocorrect', json={'fn': 'exp', 'm': 2, 'n': 2, 'level': 1e-10}).get_json()
        assert data['success'] is True
        assert data['report']['experiment']['perturbation'] == 'coefficient noise 1e-10 (seed 1)'

    def test_model(self, client):
        samples = [[x / 10.0, math.exp(x / 10.0)] for x in range(11)]
        data = client.post('/api/model', json={'samples': samples, 'm': 1, 'n': 1}).get_json()
        assert data['success'] is True
        assert data['report']['samples']['points'] == 11

    def test_accelerate(self, client):
        data = client.post('/api/accelerate', json={'fn': 'exp', 'm': 1, 'n': 1}).get_json()
        assert data['success'] is True
        assert data['report']['acceleration']['poly_degree'] == 3


class TestCatalogAndElemfun:
    def test_functions(self, client):
        data = client.get('/api/functions').get_json()
        assert data['success'] is True
        names = [entry['name'] for entry in data['functions']]
        assert 'exp' in names and 'tan-scaled' in names

    def test_value(self, client):
        data = client.get('/api/elemfun/sin?x=0.5&precision=enhanced').get_json()
        assert data['success'] is True
        assert data['value'] == pytest.approx(math.sin(0.5), rel=1e-12)

    def test_missing_argument(self, client):
        data = client.get('/api/elemfun/sin').get_json()
        assert data['success'] is False
        assert data['details']['type'] == 'UsageError'

    def test_domain_error(self, client):
        data = client.get('/api/elemfun/lg?x=-1').get_json()
        assert data['success'] is False
        assert data['details']['type'] == 'ElemfunDomainError'

    def test_harness(self, client):
        data = client.get('/api/elemfun/atan/harness?grid=1000').get_json()
        assert data['success'] is True
        assert data['harness']['precision'] == 'ordinary'
        assert data['harness']['grid'] == 1000


class TestLogEndpoints:
    def test_jobs_are_logged(self, client):
        logging_service.clear_logs()
        client.post('/api/approx', json={'fn': 'exp', 'm': 1, 'n': 1})
        data = client.get('/api/logs?source=api').get_json()
        assert data['success'] is True
        assert [log['message'] for log in data['logs']] == ['approx job finished']

    def test_stats_and_clear(self, client):
        logging_service.clear_logs()
        client.post('/api/approx', json={'fn': 'exp', 'm': 1, 'n': 1})
        stats = client.get('/api/logs/stats').get_json()['stats']
        assert stats['sources']['api'] == 1
        assert client.post('/api/logs/clear').get_json()['success'] is True
        assert client.get('/api/logs/stats').get_json()['stats']['total_entries'] == 0

    def test_export(self, client):
        logging_service.clear_logs()
        logging_service.info('exported', 'api')
        response = client.get('/api/logs/export?format=json')
        assert response.status_code == 200
        assert 'attachment' in response.headers['Content-Disposition']
        assert json.loads(response.data)[0]['message'] == 'exported'
        text = client.get('/api/logs/export?format=txt').get_data(as_text=True)
        assert '[api] exported' in text
