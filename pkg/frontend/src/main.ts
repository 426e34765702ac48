// Browser entry point. The bridge address comes from ?ws=…, defaulting
// to the bridge's own default port on this host.

import { createApp } from './app.js';
import { connectWebSocket } from './wsTransport.js';

const root = document.getElementById('app');
if (root === null) {
  throw new Error('index.html must provide a #app element');
}
const params = new URLSearchParams(window.location.search);
const url = params.get('ws') ?? `ws://${window.location.hostname || '127.0.0.1'}:8800`;

const app = createApp({ root, connect: () => connectWebSocket(url) });
void app.start();
