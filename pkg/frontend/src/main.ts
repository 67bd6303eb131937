// Entry point for the static bundle served at /ui: the API lives on the
// same origin, so the client uses relative paths.

import { ReportApi } from './api.js';
import { wireApp } from './app.js';

const container = document.getElementById('app');
if (container) {
  wireApp(container, new ReportApi(''));
}
