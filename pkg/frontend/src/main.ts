import { ApiClient } from './api.js';
import { App } from './app.js';

const root = document.getElementById('app');
if (!root) {
  throw new Error('missing #app mount point');
}
void new App(root, new ApiClient('')).start();
