"""
Rational Approximation Workbench - HTTP server entry point
"""

import os

from app import create_app
from app.core.config import config

app = create_app(config[os.environ.get('FLASK_CONFIG', 'default')])

if __name__ == '__main__':
    port = int(os.environ.get('PORT', 5000))
    app.run(host='0.0.0.0', port=port, debug=app.config.get('DEBUG', False))
